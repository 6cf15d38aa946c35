#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mollify_lab/field.hpp"
#include "mollify_lab/field_ops.hpp"
#include "mollify_lab/rate.hpp"
#include "mollify_lab/stencil.hpp"

namespace mollify_lab {

/// Outcome of one executable estimate. With a theoretical constant, passed
/// means measured <= theoretical (1 + tol) (and the slope floor, if any).
struct LemmaVerdict {
  std::string lemma;
  double constant_measured = 0.0;
  std::optional<double> constant_theoretical;
  double margin = 0.0;  // theoretical (1 + tol) - measured
  std::optional<RateReport> rate;
  std::optional<double> slope_floor;
  std::vector<double> eps_list;
  bool vacuous = false;
  bool passed = false;
  nlohmann::json details = nlohmann::json::object();
};

struct LemmaConfig {
  double tol = 0.1;
  HolderMode holder = HolderMode::exact();
  /// Use this seminorm instead of measuring it.
  std::optional<double> seminorm;
  /// Require the fitted error slope to reach this value.
  std::optional<double> slope_floor;
  /// Largest maximal-function radius in nodes.
  std::size_t max_radius_nodes = 13;
  /// Pass window for ratios of constants measured at different eps.
  double stability_window = 2.0;
};

/// |u_eps - u|_inf / ([u] eps^alpha) against 1.
LemmaVerdict check_conv20(const VectorField3& u, double alpha, const std::vector<double>& eps_list,
                          const LemmaConfig& config = {});
/// |grad u_eps|_inf eps^(1 - alpha) / [u] against c_rho, gradient stencil form.
LemmaVerdict check_conv30(const VectorField3& u, double alpha, const std::vector<double>& eps_list,
                          const LemmaConfig& config = {});
/// sup |tau u(x + y) - tau u(x)| / (|y|^alpha [u]) against 1 for lattice probes y.
LemmaVerdict check_conv1p(const VectorField3& u, double alpha, double epsilon,
                          const std::vector<LatticeOffset>& y_list, const LemmaConfig& config = {});
/// |S_eps u - u|_inf / ([u] eps^alpha) against 3^alpha.
LemmaVerdict check_conv2p(const VectorField3& u, double alpha, const std::vector<double>& eps_list,
                          const LemmaConfig& config = {});
/// |grad S_eps u|_inf eps^(1 - alpha) / [u] against c_rho, gradient stencil form.
LemmaVerdict check_conv3p(const VectorField3& u, double alpha, const std::vector<double>& eps_list,
                          const LemmaConfig& config = {});

/// Support, trace, maximal dominations, first-order error, L^r and W^{1,r}
/// stability, and strong convergence of S_eps.
std::vector<LemmaVerdict> check_basic_properties(const VectorField3& u,
                                                 const std::vector<double>& eps_list,
                                                 const std::vector<double>& r_list,
                                                 const LemmaConfig& config = {});

/// rho_eps * S_eps(u) vanishes on x3 = 0; for a divergence-free u its
/// divergence stays below 1e-12 on layers k <= n3 - 2.
LemmaVerdict check_admissibility(const VectorField3& u, double epsilon,
                                 const LemmaConfig& config = {});

/// max |div| over layers k <= n3 - 2.
double interior_divergence(const VectorField3& v);

nlohmann::json to_json(const LemmaVerdict& verdict);

}  // namespace mollify_lab
