#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mollify_lab/energy_audit.hpp"
#include "mollify_lab/exponents.hpp"
#include "mollify_lab/rate.hpp"
#include "mollify_lab/synth.hpp"
#include "support.hpp"

using namespace mollify_lab;
using test_support::error_of;

namespace {

std::vector<double> uniform_times(double T, std::size_t M) {
  std::vector<double> t;
  for (std::size_t j = 0; j <= M; ++j) t.push_back(T * static_cast<double>(j) / static_cast<double>(M));
  return t;
}

// v(t) = a(t) w with a given profile; derivatives stored only when `exact`.
TimeSeries scaled_series(const VectorField3& w, const std::vector<double>& times, double (*a)(double),
                         double (*da)(double), bool exact) {
  TimeSeries s{w.grid(), times, {}, {}};
  for (double t : times) {
    s.snapshots.push_back(a(t) * w);
    if (exact) s.derivatives.push_back(da(t) * w);
  }
  return s;
}

constexpr double kNu = 0.01;

// Shear channel with h = 1/n, two nodes tangentially (the flow is layered).
TimeSeries shear(std::size_t n, std::size_t M, double T = 1.6) {
  const HalfSpaceGrid g(2, 2, n + 1, 1.0 / static_cast<double>(n));
  return exact_stokes_shear(1.0, 1, kNu, g, uniform_times(T, M), n / 4);
}

}  // namespace

TEST_CASE("exact Stokes shear") {
  const std::size_t n = 32;
  const HalfSpaceGrid g(4, 4, n + 1, 1.0 / n);
  const TimeSeries s = exact_stokes_shear(1.0, 1, kNu, g, uniform_times(1.0, 4));
  const double k = std::numbers::pi / g.length3();
  const double area = g.period1() * g.period2();
  for (std::size_t j = 0; j < s.times.size(); ++j) {
    const double exact = std::exp(-2.0 * kNu * k * k * s.times[j]) * area * g.length3() / 2.0;
    const double l2 = lp_norm(s.snapshots[j], 2.0);
    CHECK(test_support::rel_diff(l2 * l2, exact) < 1e-12);
    CHECK(test_support::max_abs_inner(divergence(s.snapshots[j]), 0, g.n3() - 1) == 0.0);
  }
  CHECK(error_of([&] { (void)exact_stokes_shear(1.0, 0, kNu, g, uniform_times(1.0, 4)); }) ==
        ErrorCode::invalid_argument);
  CHECK(error_of([&] { (void)exact_stokes_shear(1.0, 1, kNu, g, {0.0, 0.1, 0.3}); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("time derivative") {
  const HalfSpaceGrid g(4, 4, 17, 1.0 / 16.0);
  const VectorField3 w = power_field(1.0, g, 4);
  SUBCASE("constant in time") {
    TimeSeries s = scaled_series(w, uniform_times(1.0, 4), [](double) { return 2.0; },
                                 [](double) { return 0.0; }, false);
    for (std::size_t j = 0; j < 5; ++j) CHECK(lp_norm(dt_field(s, j), kInfinity) == 0.0);
  }
  SUBCASE("linear in time is differenced exactly") {
    TimeSeries s = scaled_series(w, uniform_times(1.0, 4), [](double t) { return 1.0 + 3.0 * t; },
                                 [](double) { return 3.0; }, false);
    for (std::size_t j = 0; j < 5; ++j) CHECK(lp_norm(dt_field(s, j) - 3.0 * w, kInfinity) < 1e-13);
  }
  SUBCASE("shear: centred difference is second order") {
    auto err = [](std::size_t M) {
      TimeSeries s = shear(16, M, 40.0);
      const VectorField3 exact = s.derivatives[M / 2];
      s.derivatives.clear();
      return lp_norm(dt_field(s, M / 2) - exact, kInfinity);
    };
    CHECK(err(8) / err(16) == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("smoothed balance") {
  SUBCASE("zero series") {
    const HalfSpaceGrid g(8, 8, 16, 1.0 / 8.0);
    TimeSeries s{g, uniform_times(1.0, 2), {}, {}};
    for (int j = 0; j < 3; ++j) s.snapshots.push_back(VectorField3::zeros(g));
    const BalanceRow r = smoothed_balance(s, 2.0 / 8.0, kNu, 2);
    CHECK(r.term_dt == 0.0);
    CHECK(r.term_visc == 0.0);
    CHECK(r.term_conv == 0.0);
    CHECK(r.residual == 0.0);
    const ISplit split = i_split(s, 2.0 / 8.0, 2);
    CHECK(split.i1 == 0.0);
    CHECK(split.i2 == 0.0);
    CHECK(energy_equality_residual(s, kNu, 2) == 0.0);
    CHECK(timed_term_bound(s, 2.0 / 8.0, 0.5, 1.9, 1.2) == 0.0);
  }
  SUBCASE("shear: no convective contribution, exact rearrangement") {
    const TimeSeries s = shear(32, 8);
    const double h = s.grid.h();
    std::vector<double> residuals;
    // 2 eps stays inside the top buffer of n / 4 layers.
    for (double eps : {4 * h, 2 * h, h}) {
      const BalanceRow r = smoothed_balance(s, eps, kNu, 8);
      CHECK(std::abs(r.term_conv) <= 1e-10);
      CHECK(std::abs(r.i1 + r.i2 - r.term_dt) <= 1e-10 * std::abs(r.term_dt));
      residuals.push_back(std::abs(r.residual));
    }
    for (std::size_t n = 1; n < residuals.size(); ++n) CHECK(residuals[n] < residuals[n - 1]);
  }
  SUBCASE("steady series has i1 = 0") {
    const HalfSpaceGrid g(16, 16, 24, 1.0 / 16.0);
    const VectorField3 w = curl_field(1, 2, 1.0, 8, g);
    TimeSeries s = scaled_series(w, uniform_times(1.0, 2), [](double) { return 1.0; },
                                 [](double) { return 0.0; }, false);
    CHECK(i_split(s, 2.0 / 16.0, 2).i1 == 0.0);
  }
  SUBCASE("shear: i1 approaches the energy change") {
    const TimeSeries s = shear(64, 8);
    const double h = s.grid.h();
    const double l0 = lp_norm(s.snapshots.front(), 2.0), l1 = lp_norm(s.snapshots.back(), 2.0);
    const double target = 0.5 * (l1 * l1 - l0 * l0);
    std::vector<std::pair<double, double>> pts;
    for (double eps : {8 * h, 4 * h, 2 * h}) pts.emplace_back(eps, std::abs(i_split(s, eps, 8).i1_energy - target));
    CHECK(fit_rate(pts).slope > 0.0);
  }
}

TEST_CASE("energy equality residual") {
  SUBCASE("second order under simultaneous h and dt halving") {
    // Relative to the initial energy: the tangential box shrinks with h.
    auto rel = [](std::size_t n, std::size_t M) {
      const TimeSeries s = shear(n, M);
      const double e0 = lp_norm(s.snapshots.front(), 2.0);
      return energy_equality_residual(s, kNu, M) / (0.5 * e0 * e0);
    };
    const double r16 = rel(16, 4), r32 = rel(32, 8), r64 = rel(64, 16);
    CHECK(std::abs(r16 / r32) > 3.0);
    CHECK(std::abs(r16 / r32) < 5.0);
    CHECK(std::abs(r32 / r64) > 3.0);
    CHECK(std::abs(r32 / r64) < 5.0);
  }
  SUBCASE("damped series loses energy") {
    TimeSeries s = shear(32, 8);
    for (std::size_t j = 0; j < s.times.size(); ++j) {
      const double d = std::exp(-s.times[j]);
      s.derivatives[j] = d * s.derivatives[j] - d * s.snapshots[j];
      s.snapshots[j] = d * s.snapshots[j];
    }
    CHECK(energy_equality_residual(s, kNu, 8) < 0.0);
  }
}

TEST_CASE("timed term bound") {
  const HalfSpaceGrid g(16, 16, 24, 1.0 / 16.0);
  const VectorField3 w = curl_field(2, 2, 1.0, 8, g);
  const TimeSeries s = scaled_series(w, uniform_times(1.0, 4), [](double t) { return 1.0 + t * t; },
                                     [](double t) { return 2.0 * t; }, true);
  const double alpha = 0.5, beta = 1.9, q = 1.1;
  const double margin = est_eps_margin(alpha, q, beta);
  const double b1 = timed_term_bound(s, 4.0 / 16.0, alpha, beta, q);
  const double b2 = timed_term_bound(s, 2.0 / 16.0, alpha, beta, q);
  CHECK(b1 > 0.0);
  // Smaller eps gives a smaller bound when the margin is positive.
  CHECK(std::abs(b1 / b2 - std::pow(2.0, margin)) < 1e-10);
  TimedBoundOptions unit;
  unit.c = 1.0;
  CHECK(timed_term_bound(s, 0.25, alpha, beta, q, unit) < b1);
  CHECK(error_of([&] { (void)timed_term_bound(s, 0.25, alpha, beta, 2.5); }) ==
        ErrorCode::invalid_exponent);
}

TEST_CASE("convergence study") {
  SUBCASE("shear") {
    const TimeSeries s = shear(32, 8);
    const double h = s.grid.h();
    StudyOptions opts;
    opts.with_bound = false;
    const EnergyReport r = convergence_study(s, kNu, {h, 4 * h, 2 * h, 8 * h}, 0.5, 1.9, 1.2, opts);
    REQUIRE(r.rows.size() == 4);
    CHECK(r.rows.front().epsilon == 8 * h);
    CHECK(std::abs(r.equality_residual) < 1e-2 * r.energy_rhs);
    CHECK(r.equality_residual == doctest::Approx(r.energy_lhs - r.energy_rhs));
    // Viscous term tends to the dissipation.
    for (std::size_t n = 1; n < r.rows.size(); ++n)
      CHECK(std::abs(r.rows[n].term_visc - r.dissipation) <=
            1.05 * std::abs(r.rows[n - 1].term_visc - r.dissipation));
    const std::string csv = to_csv(r);
    CHECK(csv.rfind("epsilon,term_dt,term_visc,term_conv,residual,i1,i2,i1_energy,bound\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    const nlohmann::json j = to_json(r);
    CHECK(j.at("rows").size() == 4);
  }
  SUBCASE("zero series") {
    const HalfSpaceGrid g(8, 8, 16, 1.0 / 8.0);
    TimeSeries s{g, uniform_times(1.0, 2), {}, {}};
    for (int j = 0; j < 3; ++j) s.snapshots.push_back(VectorField3::zeros(g));
    const EnergyReport r = convergence_study(s, kNu, {2.0 / 8.0, 1.0 / 8.0}, 0.5, 1.9, 1.2);
    for (const auto& row : r.rows) {
      CHECK(row.residual == 0.0);
      CHECK(row.bound.value_or(-1.0) == 0.0);
    }
    CHECK(r.equality_residual == 0.0);
  }
  SUBCASE("rough curl field: convective term decreases") {
    const double h = 1.0 / 32.0;
    const HalfSpaceGrid g(32, 32, 96, h);
    const VectorField3 w = curl_field(42, 1, 1.0, 24, g);
    const TimeSeries s = scaled_series(w, uniform_times(1.0, 2), [](double t) { return 1.0 + t; },
                                       [](double) { return 1.0; }, true);
    StudyOptions opts;
    opts.with_bound = false;
    const EnergyReport r = convergence_study(s, kNu, {8 * h, 4 * h, 2 * h, h}, 0.5, 1.9, 1.2, opts);
    for (std::size_t n = 1; n < r.rows.size(); ++n)
      CHECK(std::abs(r.rows[n].term_conv) <= 1.1 * std::abs(r.rows[n - 1].term_conv));
  }
  CHECK(error_of([] {
          const HalfSpaceGrid g(8, 8, 16, 1.0 / 8.0);
          TimeSeries s{g, uniform_times(1.0, 2), {}, {}};
          for (int j = 0; j < 3; ++j) s.snapshots.push_back(VectorField3::zeros(g));
          (void)convergence_study(s, kNu, {}, 0.5, 1.9, 1.2);
        }) == ErrorCode::invalid_argument);
}
