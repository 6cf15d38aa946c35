#pragma once

#include <optional>

#include "json.hpp"

namespace mollify_lab {

/// Open endpoints are excluded with this slack.
inline constexpr double kWindowSlack = 1e-9;

struct OpenInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const noexcept { return !(lo < hi); }
  bool contains(double x, double slack = kWindowSlack) const noexcept {
    return x > lo + slack && x < hi - slack;
  }
};

/// 6 / (3 + 2 alpha), alpha in (0, 1).
double beta0(double alpha);

/// (4 / (2 + beta), 4 / (4 - beta)) for beta in [1, 2].
OpenInterval r_window(double beta);

/// 2 r beta / (4 r + r beta - 4) for r in r_window(beta).
double shinbrot_s(double r, double beta);

/// Admissible q: (4 / (2 + beta), 2).
OpenInterval q_window(double beta);

struct ConjugatePair {
  double s = 0.0;
  double s_prime = 0.0;
};

/// s = q beta / (q + q beta - 2), s' = beta q / (2 - q).
ConjugatePair s_of_q(double q, double beta);
/// r = 4 q / (4 + 2 q - q beta).
double r_of_q(double q, double beta);
/// r = 4 s / (4 s + beta s - 2 beta).
double r_of_s(double s, double beta);

/// alpha (2/q - 1) - 3 (2 - beta) / 4: the eps exponent of the time-derivative
/// bound.
double est_eps_margin(double alpha, double q, double beta);
/// The margin at the lower end q = 4 / (2 + beta): alpha beta / 2 - 3 (2 - beta) / 4.
double optimized_margin(double alpha, double beta);
/// Zero of optimized_margin(alpha, .) on [1, 2] by bracketing root search.
double margin_threshold(double alpha);

/// (4 + beta) / (2 (2 + beta)) + 1 / (2 + beta) <= 1.
bool remark37_check(double beta);

/// v0_l2^(2/r - 1) v_linf^(2 (1 - 1/r)) grad_l2 for r in (1, 2). v_l2 is only
/// checked against v0_l2 (it may not exceed the initial energy).
double shinbrot_pointwise_bound(double v_l2, double v_linf, double grad_l2, double v0_l2, double r);

struct ExponentBundle {
  double alpha = 0.0;
  double beta = 0.0;
  double beta0 = 0.0;
  double q = 0.0;
  double r = 0.0;  // r_of_q
  double s = 0.0;
  double s_prime = 0.0;
  double r_via_s = 0.0;
  double margin = 0.0;
  double theorem_r = 0.0;  // time exponent of the initial-datum class
  double theorem_s = 0.0;  // shinbrot_s(theorem_r, beta)
  struct Flags {
    bool beta_above_threshold = false;
    bool q_in_window = false;
    bool r_in_1_q = false;
    bool s_in_1_2 = false;
    bool conjugate = false;
    bool r_forms_agree = false;
    bool margin_positive = false;
    bool theorem_r_in_window = false;
    bool theorem_s_above_1 = false;
  } valid;
};

/// q defaults to the midpoint of q_window(beta), theorem_r to the midpoint of
/// r_window(beta).
ExponentBundle make_bundle(double alpha, double beta, std::optional<double> q = std::nullopt,
                           std::optional<double> theorem_r = std::nullopt);

nlohmann::json to_json(const ExponentBundle& bundle);

}  // namespace mollify_lab
