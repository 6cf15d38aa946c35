#include "mollify_lab/energy_audit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "mollify_lab/error.hpp"
#include "mollify_lab/exponents.hpp"
#include "mollify_lab/kernel.hpp"
#include "mollify_lab/mollifier.hpp"

namespace mollify_lab {

namespace {

double trapezoid(const std::vector<double>& f, double dt, std::size_t last) {
  double s = 0.0;
  for (std::size_t j = 0; j < last; ++j) s += 0.5 * dt * (f[j] + f[j + 1]);
  return s;
}

void require_index(const TimeSeries& series, std::size_t t_index) {
  series.validate();
  if (t_index >= series.snapshots.size())
    throw LabError(ErrorCode::invalid_argument, "time index past the end of the series");
}

struct SnapshotTerms {
  double dt = 0.0, grad = 0.0, conv = 0.0, i1 = 0.0, i2 = 0.0, energy = 0.0;
};

SnapshotTerms snapshot_terms(const TimeSeries& series, std::size_t j, double eps) {
  const VectorField3& v = series.snapshots[j];
  const VectorField3 dv = mollify(dt_field(series, j), eps);
  const VectorField3 v_eps = mollify(v, eps);
  const VectorField3 sv = conv_translate(v, eps);
  const TensorField grad_sv = gradient(sv);
  SnapshotTerms t;
  t.dt = l2_inner(dv, sv);
  t.grad = contract_integral(gradient(v_eps), grad_sv);
  t.conv = contract_integral(mollify_outer(v, eps), grad_sv);
  t.i1 = l2_inner(dv, v_eps);
  t.i2 = l2_inner(dv, sv - v_eps);
  t.energy = 0.5 * l2_inner(v_eps, v_eps);
  return t;
}

BalanceRow assemble(const TimeSeries& series, double eps, double nu,
                    const std::vector<SnapshotTerms>& terms, std::size_t t_index) {
  const double dt = series.snapshots.size() > 1 ? series.dt() : 0.0;
  auto integral = [&](double SnapshotTerms::*member) {
    std::vector<double> f(terms.size());
    for (std::size_t j = 0; j < terms.size(); ++j) f[j] = terms[j].*member;
    return trapezoid(f, dt, t_index);
  };
  BalanceRow row;
  row.epsilon = eps;
  row.term_dt = integral(&SnapshotTerms::dt);
  row.term_visc = nu * integral(&SnapshotTerms::grad);
  row.term_conv = integral(&SnapshotTerms::conv);
  row.residual = row.term_dt + row.term_visc - row.term_conv;
  row.i1 = integral(&SnapshotTerms::i1);
  row.i2 = integral(&SnapshotTerms::i2);
  row.i1_energy = terms[t_index].energy - terms[0].energy;
  return row;
}

std::vector<SnapshotTerms> all_terms(const TimeSeries& series, double eps, std::size_t last) {
  std::vector<SnapshotTerms> terms;
  terms.reserve(last + 1);
  for (std::size_t j = 0; j <= last; ++j) terms.push_back(snapshot_terms(series, j, eps));
  return terms;
}

}  // namespace

double TimeSeries::dt() const {
  if (times.size() < 2) throw LabError(ErrorCode::invalid_argument, "series needs two times");
  return times[1] - times[0];
}

void TimeSeries::validate() const {
  if (snapshots.empty() || snapshots.size() != times.size())
    throw LabError(ErrorCode::invalid_argument, "one snapshot per time is required");
  if (!derivatives.empty() && derivatives.size() != snapshots.size())
    throw LabError(ErrorCode::invalid_argument, "one derivative per snapshot is required");
  if (derivatives.empty() && snapshots.size() < 3)
    throw LabError(ErrorCode::invalid_argument, "differencing needs at least 3 snapshots");
  for (const auto& s : snapshots) require_same_grid(grid, s.grid());
  for (const auto& s : derivatives) require_same_grid(grid, s.grid());
  if (times.size() >= 2) {
    const double step = times[1] - times[0];
    if (!(step > 0.0)) throw LabError(ErrorCode::invalid_argument, "times must increase");
    for (std::size_t j = 1; j < times.size(); ++j)
      if (std::abs((times[j] - times[j - 1]) - step) > 1e-9 * step)
        throw LabError(ErrorCode::invalid_argument, "time step must be uniform");
  }
}

TimeSeries exact_stokes_shear(double A, int m, double nu, const HalfSpaceGrid& grid,
                              std::vector<double> times, std::size_t top_buffer) {
  if (m < 1) throw LabError(ErrorCode::invalid_argument, "mode number must be positive");
  if (!(nu >= 0.0)) throw LabError(ErrorCode::invalid_argument, "viscosity must be nonnegative");
  if (top_buffer + 3 > grid.n3())
    throw LabError(ErrorCode::invalid_argument, "top buffer leaves no channel");
  const double Lc = grid.length3() - static_cast<double>(top_buffer) * grid.h();
  const double k = m * std::numbers::pi / Lc;
  const double edge = Lc - 1e-9 * grid.h();
  const ScalarField profile = ScalarField::from_function(
      grid, [&](double, double, double x3) { return x3 >= edge ? 0.0 : std::sin(k * x3); });
  const ScalarField zero = ScalarField::zeros(grid);
  TimeSeries s{grid, std::move(times), {}, {}};
  for (double t : s.times) {
    const double a = A * std::exp(-nu * k * k * t);
    s.snapshots.emplace_back(a * profile, zero, zero);
    s.derivatives.emplace_back((-nu * k * k * a) * profile, zero, zero);
  }
  s.validate();
  return s;
}

VectorField3 dt_field(const TimeSeries& series, std::size_t j) {
  if (j >= series.snapshots.size())
    throw LabError(ErrorCode::invalid_argument, "time index past the end of the series");
  if (!series.derivatives.empty()) return series.derivatives[j];
  const auto& v = series.snapshots;
  const double inv = 1.0 / (2.0 * series.dt());
  const std::size_t M = v.size() - 1;
  if (j == 0) return inv * ((4.0 * v[1] - 3.0 * v[0]) - v[2]);
  if (j == M) return inv * ((3.0 * v[M] - 4.0 * v[M - 1]) + v[M - 2]);
  return inv * (v[j + 1] - v[j - 1]);
}

BalanceRow smoothed_balance(const TimeSeries& series, double epsilon, double nu,
                            std::size_t t_index) {
  require_index(series, t_index);
  return assemble(series, epsilon, nu, all_terms(series, epsilon, t_index), t_index);
}

ISplit i_split(const TimeSeries& series, double epsilon, std::size_t t_index) {
  const BalanceRow row = smoothed_balance(series, epsilon, 0.0, t_index);
  return {row.i1, row.i2, row.i1_energy};
}

double timed_term_bound(const TimeSeries& series, double epsilon, double alpha, double beta,
                        double q, const TimedBoundOptions& options) {
  series.validate();
  const double margin = est_eps_margin(alpha, q, beta);
  const double r = r_of_q(q, beta);
  const double s = s_of_q(q, beta).s;
  const double dt = series.snapshots.size() > 1 ? series.dt() : 0.0;
  const std::size_t last = series.snapshots.size() - 1;

  std::vector<double> deriv(series.snapshots.size()), semi(series.snapshots.size());
  for (std::size_t j = 0; j <= last; ++j) {
    deriv[j] = std::pow(lp_norm(dt_field(series, j), r), s);
    semi[j] = std::pow(holder_seminorm(series.snapshots[j], alpha, options.holder), beta);
  }
  const double deriv_norm = last == 0 ? 0.0 : std::pow(trapezoid(deriv, dt, last), 1.0 / s);
  const double semi_norm = last == 0 ? 0.0 : std::pow(trapezoid(semi, dt, last), 1.0 / beta);
  const double v0 = lp_norm(series.snapshots.front(), 2.0);
  const double theta = 2.0 / q - 1.0;

  double c = 0.0;
  if (options.c) {
    c = *options.c;
  } else {
    const double p = 1.0 / (1.0 + 1.0 / q - 1.0 / r);
    c = kernel_lp_norm(standard_kernel(), p) * std::pow(1.0 + std::pow(3.0, alpha), theta) *
        std::pow(2.0, 2.0 - 2.0 / q);
  }
  return c * std::pow(epsilon, margin) * deriv_norm * std::pow(semi_norm, theta) *
         std::pow(v0, 2.0 - 2.0 / q);
}

double energy_equality_residual(const TimeSeries& series, double nu, std::size_t t_index) {
  require_index(series, t_index);
  std::vector<double> dissipation(t_index + 1);
  for (std::size_t j = 0; j <= t_index; ++j)
    dissipation[j] = dirichlet_energy(series.snapshots[j]);
  const double dt = t_index > 0 ? series.dt() : 0.0;
  const double e_t = 0.5 * l2_inner(series.snapshots[t_index], series.snapshots[t_index]);
  const double e_0 = 0.5 * l2_inner(series.snapshots[0], series.snapshots[0]);
  return (e_t + nu * trapezoid(dissipation, dt, t_index)) - e_0;
}

EnergyReport convergence_study(const TimeSeries& series, double nu, std::vector<double> eps_list,
                               double alpha, double beta, double q, const StudyOptions& options) {
  series.validate();
  if (eps_list.empty()) throw LabError(ErrorCode::invalid_argument, "empty eps list");
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
  const std::size_t last = series.snapshots.size() - 1;

  EnergyReport report;
  report.alpha = alpha;
  report.beta = beta;
  report.q = q;
  report.margin = est_eps_margin(alpha, q, beta);
  for (double eps : eps_list) {
    BalanceRow row = assemble(series, eps, nu, all_terms(series, eps, last), last);
    if (options.with_bound)
      row.bound = timed_term_bound(series, eps, alpha, beta, q, options.bound);
    report.rows.push_back(row);
  }
  std::vector<double> dissipation(last + 1);
  for (std::size_t j = 0; j <= last; ++j) dissipation[j] = dirichlet_energy(series.snapshots[j]);
  const double dt = last > 0 ? series.dt() : 0.0;
  report.dissipation = nu * trapezoid(dissipation, dt, last);
  report.energy_rhs = 0.5 * l2_inner(series.snapshots[0], series.snapshots[0]);
  report.energy_lhs = 0.5 * l2_inner(series.snapshots[last], series.snapshots[last]) +
                      report.dissipation;
  report.equality_residual = report.energy_lhs - report.energy_rhs;

  auto try_fit = [&](auto value) -> std::optional<RateReport> {
    if (report.rows.size() < 3) return std::nullopt;
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : report.rows) pts.emplace_back(row.epsilon, std::abs(value(row)));
    for (const auto& p : pts)
      if (!(p.second > 0.0)) return std::nullopt;
    return fit_rate(std::move(pts));
  };
  report.i2_rate = try_fit([](const BalanceRow& r) { return r.i2; });
  report.conv_rate = try_fit([](const BalanceRow& r) { return r.term_conv; });
  return report;
}

nlohmann::json to_json(const BalanceRow& row) {
  nlohmann::json j = {{"epsilon", row.epsilon},     {"term_dt", row.term_dt},
                      {"term_visc", row.term_visc}, {"term_conv", row.term_conv},
                      {"residual", row.residual},   {"i1", row.i1},
                      {"i2", row.i2},               {"i1_energy", row.i1_energy}};
  j["bound"] = row.bound ? nlohmann::json(*row.bound) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const EnergyReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) rows.push_back(to_json(r));
  nlohmann::json j = {{"rows", rows},
                      {"limit",
                       {{"energy_lhs", report.energy_lhs},
                        {"energy_rhs", report.energy_rhs},
                        {"dissipation", report.dissipation},
                        {"equality_residual", report.equality_residual}}},
                      {"alpha", report.alpha},
                      {"beta", report.beta},
                      {"q", report.q},
                      {"est_eps_margin", report.margin}};
  j["i2_rate"] = report.i2_rate ? to_json(*report.i2_rate) : nlohmann::json(nullptr);
  j["conv_rate"] = report.conv_rate ? to_json(*report.conv_rate) : nlohmann::json(nullptr);
  return j;
}

std::string to_csv(const EnergyReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "epsilon,term_dt,term_visc,term_conv,residual,i1,i2,i1_energy,bound\n";
  for (const auto& r : report.rows) {
    out << r.epsilon << ',' << r.term_dt << ',' << r.term_visc << ',' << r.term_conv << ','
        << r.residual << ',' << r.i1 << ',' << r.i2 << ',' << r.i1_energy << ',';
    if (r.bound) out << *r.bound;
    out << '\n';
  }
  return out.str();
}

}  // namespace mollify_lab
