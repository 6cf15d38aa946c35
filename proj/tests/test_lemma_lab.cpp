#include <cmath>
#include <random>

#include "doctest.h"
#include "mollify_lab/field_ops.hpp"
#include "mollify_lab/lemma_lab.hpp"
#include "mollify_lab/rate.hpp"
#include "mollify_lab/synth.hpp"
#include "support.hpp"

using namespace mollify_lab;
using test_support::error_of;

namespace {

std::vector<double> halvings(double h, std::initializer_list<double> nodes) {
  std::vector<double> out;
  for (double m : nodes) out.push_back(m * h);
  return out;
}

const LemmaVerdict& find(const std::vector<LemmaVerdict>& vs, const std::string& name) {
  for (const auto& v : vs)
    if (v.lemma == name) return v;
  FAIL("missing verdict " << name);
  return vs.front();
}

}  // namespace

TEST_CASE("fit_rate") {
  SUBCASE("exact power laws") {
    std::vector<std::pair<double, double>> p1, p2;
    for (double e : {0.4, 0.2, 0.1, 0.05}) {
      p1.emplace_back(e, e);
      p2.emplace_back(e, 5.0 * std::sqrt(e));
    }
    const RateReport a = fit_rate(p1);
    CHECK(std::abs(a.slope - 1.0) < 1e-12);
    const RateReport b = fit_rate(p2);
    CHECK(std::abs(b.slope - 0.5) < 1e-10);
    CHECK(std::abs(b.constant - 5.0) < 1e-10);
    CHECK_FALSE(b.dropped_largest);
    const RateReport c = fit_rate(p2, true);
    CHECK(c.dropped_largest);
    CHECK(c.pairs.size() == 4);
  }
  SUBCASE("five percent noise") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    std::vector<std::pair<double, double>> p;
    for (double e = 0.5; e > 0.01; e /= 2) p.emplace_back(e, std::pow(e, 0.75) * (1.0 + noise(rng)));
    CHECK(std::abs(fit_rate(p).slope - 0.75) < 0.05);
  }
  SUBCASE("degenerate inputs") {
    CHECK(error_of([] { (void)fit_rate({{0.1, 1.0}, {0.05, 0.5}}); }) == ErrorCode::rate_undefined);
    CHECK(error_of([] { (void)fit_rate({{0.1, 1.0}, {0.05, 0.0}, {0.02, 0.1}}); }) ==
          ErrorCode::rate_undefined);
    CHECK(error_of([] { (void)fit_rate({{0.1, 1.0}, {0.1, 0.5}, {0.02, 0.1}}); }) ==
          ErrorCode::rate_undefined);
  }
}

TEST_CASE("sup-norm estimates on the power field") {
  const double h = 1.0 / 64.0;
  const HalfSpaceGrid g(8, 8, 65, h);
  const auto eps = halvings(h, {16, 8, 4, 2});
  for (double alpha : {0.25, 0.5, 0.75}) {
    CAPTURE(alpha);
    const VectorField3 u = power_field(alpha, g, 16);
    LemmaConfig cfg;
    CHECK(check_conv20(u, alpha, eps, cfg).passed);
    CHECK(check_conv20(u, alpha, eps, cfg).constant_measured <= 1.05);
    CHECK(check_conv30(u, alpha, eps, cfg).passed);
    const LemmaVerdict c2 = check_conv2p(u, alpha, eps, cfg);
    CHECK(c2.passed);
    CHECK(*c2.constant_theoretical == doctest::Approx(std::pow(3.0, alpha)));
    REQUIRE(c2.rate);
    CHECK(c2.rate->slope >= alpha - 0.1);
    CHECK(check_conv3p(u, alpha, eps, cfg).passed);
    const LemmaVerdict c1 = check_conv1p(u, alpha, 2 * h, {{0, 0, 1}, {1, 0, 0}, {0, 0, 3}}, cfg);
    CHECK(c1.passed);
  }
}

TEST_CASE("zero field is vacuous everywhere") {
  const double h = 1.0 / 16.0;
  const HalfSpaceGrid g(16, 16, 24, h);
  const VectorField3 z = VectorField3::zeros(g);
  const auto eps = halvings(h, {4, 2, 1});
  LemmaConfig cfg;
  for (const LemmaVerdict& v : {check_conv20(z, 0.5, eps, cfg), check_conv30(z, 0.5, eps, cfg),
                                check_conv2p(z, 0.5, eps, cfg), check_conv3p(z, 0.5, eps, cfg),
                                check_conv1p(z, 0.5, h, {{1, 0, 0}}, cfg)}) {
    CHECK(v.vacuous);
    CHECK(v.passed);
  }
  for (const LemmaVerdict& v : check_basic_properties(z, eps, {1.5, 2.0}, cfg)) {
    CAPTURE(v.lemma);
    CHECK(v.passed);
  }
  CHECK(check_admissibility(z, 2 * h, cfg).passed);
}

TEST_CASE("smooth field: first-order and faster rates") {
  const double h = 1.0 / 32.0;
  const HalfSpaceGrid g(32, 32, 64, h);
  const VectorField3 u = curl_field(5, 1, 1.0, 24, g);
  const auto eps = halvings(h, {8, 4, 2});
  LemmaConfig cfg;
  cfg.seminorm = holder_seminorm(u, 0.5);
  cfg.slope_floor = 0.9;
  const LemmaVerdict c20 = check_conv20(u, 0.5, eps, cfg);
  CHECK(c20.passed);
  REQUIRE(c20.rate);
  CHECK(c20.rate->slope >= 0.9);
  cfg.slope_floor.reset();
  CHECK(check_conv2p(u, 0.5, eps, cfg).passed);
  // For C^1 data the gradient ratio eps^(1 - alpha) |grad u_eps| / [u] keeps shrinking.
  const LemmaVerdict c30 = check_conv30(u, 0.5, eps, cfg);
  CHECK(c30.passed);
  const auto ratios = c30.details.at("ratios").get<std::vector<double>>();
  for (std::size_t n = 1; n < ratios.size(); ++n) CHECK(ratios[n] < ratios[n - 1]);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> off(-4, 4);
  std::vector<LatticeOffset> ys;
  while (ys.size() < 10) {
    LatticeOffset y{off(rng), off(rng), off(rng)};
    if (y.a || y.b || y.c) ys.push_back(y);
  }
  CHECK(check_conv1p(u, 0.5, 2 * h, ys, cfg).passed);
}

TEST_CASE("Weierstrass field: conv2p rate near alpha") {
  const double h = 1.0 / 32.0;
  const HalfSpaceGrid g(32, 32, 33, h);
  const double alpha = 0.5;
  const VectorField3 u = weierstrass_field(alpha, 1, -1, 2.0, 1.0, 8, g);
  const auto eps = halvings(h, {8, 4, 2, 1});
  LemmaConfig cfg;
  cfg.holder = HolderMode::windowed(8);
  const LemmaVerdict v = check_conv2p(u, alpha, eps, cfg);
  CHECK(v.passed);
  REQUIRE(v.rate);
  CHECK(v.rate->slope >= alpha - 0.1);
  CHECK(v.rate->slope <= alpha + 0.2);
}

TEST_CASE("basic properties of S_eps") {
  const double h = 1.0 / 32.0;
  const HalfSpaceGrid g(32, 32, 48, h);
  const auto eps = halvings(h, {4, 2, 1});
  LemmaConfig cfg;
  SUBCASE("curl field") {
    // Finer step so the first-order L^r rate is out of the pre-asymptotic range.
    const double hf = 1.0 / 64.0;
    const HalfSpaceGrid gf(32, 32, 96, hf);
    const VectorField3 u = curl_field(42, 1, 1.0, 32, gf);
    const auto vs = check_basic_properties(u, halvings(hf, {4, 2, 1}), {1.5, 2.0}, cfg);
    for (const auto& v : vs) {
      CAPTURE(v.lemma);
      CHECK(v.passed);
    }
    CHECK(find(vs, "prop4.5(i) support").constant_measured == 0.0);
    CHECK(find(vs, "prop4.5(i) trace").constant_measured == 0.0);
    CHECK(find(vs, "prop4.5(ii) divergence commutation").constant_measured <= 1e-12);
  }
  SUBCASE("power field") {
    const VectorField3 u = power_field(0.5, g, 16);
    // Only C^alpha, so the guaranteed L^r rate is alpha rather than 1.
    cfg.slope_floor = 0.5;
    for (const auto& v : check_basic_properties(u, eps, {1.5, 2.0}, cfg)) {
      CAPTURE(v.lemma);
      CHECK(v.passed);
    }
  }
  SUBCASE("maximal radius cap skips large eps") {
    const VectorField3 u = curl_field(42, 1, 1.0, 16, g);
    const auto vs = check_basic_properties(u, halvings(h, {8, 4, 2}), {2.0}, cfg);
    const auto& m = find(vs, "prop4.5(iii) maximal domination");
    CHECK(m.details.at("skipped_eps").size() == 1);
    CHECK(m.passed);
  }
  CHECK(error_of([&] { (void)check_basic_properties(VectorField3::zeros(g), {}, {2.0}, cfg); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("admissibility of the double smoothing") {
  const double h = 1.0 / 32.0;
  const HalfSpaceGrid g(32, 32, 48, h);
  LemmaConfig cfg;
  const VectorField3 curl_u = curl_field(42, 2, 1.0, 12, g);
  const LemmaVerdict a = check_admissibility(curl_u, 4 * h, cfg);
  CHECK(a.passed);
  CHECK(a.details.at("solenoidal_input") == true);
  const VectorField3 shear = power_field(1.0, g, 12);
  CHECK(check_admissibility(shear, 2 * h, cfg).passed);
  // Not divergence-free: only the boundary condition is asserted.
  const auto bump = ScalarField::from_function(g, [](double x1, double, double x3) {
    return x3 < 0.8 ? std::sin(6.0 * x1) * x3 * (0.8 - x3) : 0.0;
  });
  const VectorField3 rough(bump, ScalarField::zeros(g), ScalarField::zeros(g));
  const LemmaVerdict b = check_admissibility(rough, 2 * h, cfg);
  CHECK(b.passed);
  CHECK(b.details.at("solenoidal_input") == false);
}

TEST_CASE("argument validation and reproducibility") {
  const double h = 1.0 / 16.0;
  const HalfSpaceGrid g(8, 8, 33, h);
  const VectorField3 u = power_field(0.5, g, 8);
  LemmaConfig cfg;
  CHECK(error_of([&] { (void)check_conv20(u, 1.5, {2 * h}, cfg); }) == ErrorCode::invalid_exponent);
  CHECK(error_of([&] { (void)check_conv2p(u, 0.5, {}, cfg); }) == ErrorCode::invalid_argument);
  CHECK(error_of([&] { (void)check_conv1p(u, 0.5, 2 * h, {}, cfg); }) == ErrorCode::invalid_argument);
  const auto eps = halvings(h, {4, 2, 1});
  CHECK(to_json(check_conv2p(u, 0.5, eps, cfg)).dump() == to_json(check_conv2p(u, 0.5, eps, cfg)).dump());
}
