#include "mollify_lab/exponents.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <string>

#include "mollify_lab/error.hpp"

namespace mollify_lab {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw LabError(ErrorCode::invalid_exponent, "alpha must lie in (0, 1)");
}

void require_beta(double beta) {
  if (!(beta >= 1.0 && beta <= 2.0))
    throw LabError(ErrorCode::invalid_exponent, "beta must lie in [1, 2]");
}

double checked_div(double num, double den, const char* what) {
  if (!(den > 0.0))
    throw LabError(ErrorCode::invalid_exponent, std::string("nonpositive denominator in ") + what);
  return num / den;
}

void require_q(double q, double beta) {
  require_beta(beta);
  if (!q_window(beta).contains(q))
    throw LabError(ErrorCode::invalid_exponent,
                   "q = " + std::to_string(q) + " outside (4/(2+beta), 2)");
}

}  // namespace

double beta0(double alpha) {
  require_alpha(alpha);
  return 6.0 / (3.0 + 2.0 * alpha);
}

OpenInterval r_window(double beta) {
  require_beta(beta);
  return {4.0 / (2.0 + beta), 4.0 / (4.0 - beta)};
}

double shinbrot_s(double r, double beta) {
  const OpenInterval w = r_window(beta);
  if (!w.contains(r)) throw LabError(ErrorCode::invalid_exponent, "r outside r_window(beta)");
  return checked_div(2.0 * r * beta, 4.0 * r + r * beta - 4.0, "shinbrot_s");
}

OpenInterval q_window(double beta) {
  require_beta(beta);
  return {4.0 / (2.0 + beta), 2.0};
}

ConjugatePair s_of_q(double q, double beta) {
  require_q(q, beta);
  return {checked_div(q * beta, q + q * beta - 2.0, "s"),
          checked_div(beta * q, 2.0 - q, "s_prime")};
}

double r_of_q(double q, double beta) {
  require_q(q, beta);
  return checked_div(4.0 * q, 4.0 + 2.0 * q - q * beta, "r_of_q");
}

double r_of_s(double s, double beta) {
  require_beta(beta);
  if (!(s > 1.0)) throw LabError(ErrorCode::invalid_exponent, "s must exceed 1");
  return checked_div(4.0 * s, 4.0 * s + beta * s - 2.0 * beta, "r_of_s");
}

double est_eps_margin(double alpha, double q, double beta) {
  require_alpha(alpha);
  require_q(q, beta);
  return alpha * (2.0 / q - 1.0) - 3.0 * (2.0 - beta) / 4.0;
}

double optimized_margin(double alpha, double beta) {
  require_alpha(alpha);
  require_beta(beta);
  return alpha * beta / 2.0 - 3.0 * (2.0 - beta) / 4.0;
}

double margin_threshold(double alpha) {
  require_alpha(alpha);
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      [alpha](double beta) { return optimized_margin(alpha, beta); }, 1.0, 2.0,
      boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (a + b);
}

bool remark37_check(double beta) {
  if (!(beta > 0.0)) throw LabError(ErrorCode::invalid_exponent, "beta must be positive");
  return (4.0 + beta) / (2.0 * (2.0 + beta)) + 1.0 / (2.0 + beta) <= 1.0;
}

double shinbrot_pointwise_bound(double v_l2, double v_linf, double grad_l2, double v0_l2, double r) {
  if (!(r > 1.0 && r < 2.0)) throw LabError(ErrorCode::invalid_exponent, "r must lie in (1, 2)");
  if (!(v_l2 >= 0.0 && v_linf >= 0.0 && grad_l2 >= 0.0 && v0_l2 >= 0.0))
    throw LabError(ErrorCode::invalid_argument, "norms must be nonnegative");
  if (v_l2 > v0_l2 * (1.0 + 1e-12))
    throw LabError(ErrorCode::invalid_argument, "L2 norm exceeds the initial energy");
  return std::pow(v0_l2, 2.0 / r - 1.0) * std::pow(v_linf, 2.0 * (1.0 - 1.0 / r)) * grad_l2;
}

ExponentBundle make_bundle(double alpha, double beta, std::optional<double> q,
                           std::optional<double> theorem_r) {
  require_alpha(alpha);
  require_beta(beta);
  ExponentBundle b;
  b.alpha = alpha;
  b.beta = beta;
  b.beta0 = beta0(alpha);
  b.valid.beta_above_threshold = beta > b.beta0;

  const OpenInterval qw = q_window(beta);
  b.q = q.value_or(0.5 * (qw.lo + qw.hi));
  b.valid.q_in_window = qw.contains(b.q);
  if (b.valid.q_in_window) {
    const ConjugatePair sp = s_of_q(b.q, beta);
    b.s = sp.s;
    b.s_prime = sp.s_prime;
    b.r = r_of_q(b.q, beta);
    b.r_via_s = r_of_s(b.s, beta);
    b.margin = est_eps_margin(alpha, b.q, beta);
    b.valid.r_in_1_q = b.r > 1.0 && b.r < b.q;
    b.valid.s_in_1_2 = b.s > 1.0 && b.s < 2.0;
    b.valid.conjugate = std::abs(1.0 / b.s + 1.0 / b.s_prime - 1.0) <= 1e-12;
    b.valid.r_forms_agree = std::abs(b.r - b.r_via_s) <= 1e-12 * b.r;
    b.valid.margin_positive = b.margin > 0.0;
  }

  const OpenInterval rw = r_window(beta);
  b.theorem_r = theorem_r.value_or(0.5 * (rw.lo + rw.hi));
  b.valid.theorem_r_in_window = rw.contains(b.theorem_r);
  if (b.valid.theorem_r_in_window) {
    b.theorem_s = shinbrot_s(b.theorem_r, beta);
    b.valid.theorem_s_above_1 = b.theorem_s > 1.0;
  }
  return b;
}

nlohmann::json to_json(const ExponentBundle& b) {
  const auto& v = b.valid;
  return {{"alpha", b.alpha},
          {"beta", b.beta},
          {"beta0", b.beta0},
          {"q", b.q},
          {"r", b.r},
          {"s", b.s},
          {"s_prime", b.s_prime},
          {"r_via_s", b.r_via_s},
          {"est_eps_margin", b.margin},
          {"margin_sign", b.margin > 0.0 ? "positive" : (b.margin < 0.0 ? "negative" : "zero")},
          {"theorem_r", b.theorem_r},
          {"theorem_s", b.theorem_s},
          {"valid",
           {{"beta_above_threshold", v.beta_above_threshold},
            {"q_in_window", v.q_in_window},
            {"r_in_1_q", v.r_in_1_q},
            {"s_in_1_2", v.s_in_1_2},
            {"conjugate", v.conjugate},
            {"r_forms_agree", v.r_forms_agree},
            {"margin_positive", v.margin_positive},
            {"theorem_r_in_window", v.theorem_r_in_window},
            {"theorem_s_above_1", v.theorem_s_above_1}}}};
}

}  // namespace mollify_lab
