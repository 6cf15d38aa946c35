#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mollify_lab/field.hpp"
#include "mollify_lab/field_ops.hpp"
#include "mollify_lab/rate.hpp"

namespace mollify_lab {

/// Snapshots v(t_j) on uniform times, optionally with exact time derivatives.
struct TimeSeries {
  HalfSpaceGrid grid;
  std::vector<double> times;
  std::vector<VectorField3> snapshots;
  std::vector<VectorField3> derivatives;  // empty, or one per snapshot

  double dt() const;
  /// Uniform step, shared grid, enough snapshots for differencing.
  void validate() const;
};

/// v = (A exp(-nu k^2 t) sin(k x3), 0, 0) with k = m pi / Lc on the channel
/// [0, Lc], Lc = L3 - top_buffer h, and v = 0 above it. Exact derivatives
/// are stored.
TimeSeries exact_stokes_shear(double A, int m, double nu, const HalfSpaceGrid& grid,
                              std::vector<double> times, std::size_t top_buffer = 0);

/// Stored derivative if present, else the central difference (second-order
/// one-sided at the two ends).
VectorField3 dt_field(const TimeSeries& series, std::size_t j);

struct BalanceRow {
  double epsilon = 0.0;
  double term_dt = 0.0;    // int <(dv/dt)_eps, S_eps v>
  double term_visc = 0.0;  // nu int grad v_eps : grad S_eps v
  double term_conv = 0.0;  // int (v x v)_eps : grad S_eps v
  double residual = 0.0;   // term_dt + term_visc - term_conv
  double i1 = 0.0;         // int <(dv/dt)_eps, v_eps>
  double i2 = 0.0;         // int <(dv/dt)_eps, S_eps v - v_eps>
  double i1_energy = 0.0;  // |v_eps(t)|^2 / 2 - |v_eps(0)|^2 / 2
  std::optional<double> bound;  // timed_term_bound, when requested
};

/// Time integrals by the trapezoid rule over [t_0, t_index].
BalanceRow smoothed_balance(const TimeSeries& series, double epsilon, double nu,
                            std::size_t t_index);

struct ISplit {
  double i1 = 0.0;
  double i2 = 0.0;
  double i1_energy = 0.0;
};
ISplit i_split(const TimeSeries& series, double epsilon, std::size_t t_index);

/// c eps^margin ||dv/dt||_{L^s L^r} ||[v]_alpha||_{L^beta}^(2/q - 1) ||v_0||^(2 - 2/q) over
/// the whole series, with r, s from q and beta. The default c is the explicit
/// constant ||rho||_{L^p} (1 + 3^alpha)^(2/q - 1) 2^(2 - 2/q), 1 + 1/q = 1/p + 1/r.
struct TimedBoundOptions {
  HolderMode holder = HolderMode::exact();
  std::optional<double> c;
};
double timed_term_bound(const TimeSeries& series, double epsilon, double alpha, double beta,
                        double q, const TimedBoundOptions& options = {});

/// |v(t)|^2 / 2 + nu int_0^t |grad v|^2 - |v(0)|^2 / 2, gradient energy from
/// dirichlet_energy.
double energy_equality_residual(const TimeSeries& series, double nu, std::size_t t_index);

struct EnergyReport {
  std::vector<BalanceRow> rows;  // decreasing eps
  double energy_lhs = 0.0;       // |v(t)|^2 / 2 + nu int |grad v|^2
  double energy_rhs = 0.0;       // |v(0)|^2 / 2
  double equality_residual = 0.0;
  double dissipation = 0.0;      // nu int |grad v|^2
  std::optional<RateReport> i2_rate;
  std::optional<RateReport> conv_rate;
  double alpha = 0.0, beta = 0.0, q = 0.0, margin = 0.0;
};

struct StudyOptions {
  bool with_bound = true;
  TimedBoundOptions bound;
};

EnergyReport convergence_study(const TimeSeries& series, double nu, std::vector<double> eps_list,
                               double alpha, double beta, double q,
                               const StudyOptions& options = {});

nlohmann::json to_json(const BalanceRow& row);
nlohmann::json to_json(const EnergyReport& report);
/// One line per eps: epsilon,term_dt,term_visc,term_conv,residual,i1,i2,i1_energy,bound.
std::string to_csv(const EnergyReport& report);

}  // namespace mollify_lab
