#include <cmath>

#include "doctest.h"
#include "mollify_lab/commutator.hpp"
#include "mollify_lab/mollifier.hpp"
#include "mollify_lab/synth.hpp"
#include "support.hpp"

using namespace mollify_lab;
using test_support::error_of;
using test_support::max_abs_inner;

TEST_CASE("CET decomposition") {
  const double h = 1.0 / 32.0;
  const HalfSpaceGrid g(32, 32, 40, h);
  SUBCASE("zero field") {
    const CetParts p = cet_decompose(VectorField3::zeros(g), 2 * h);
    CHECK(p.lhs.magnitude().max_abs() == 0.0);
    CHECK(p.main.magnitude().max_abs() == 0.0);
    CHECK(p.remainder.magnitude().max_abs() == 0.0);
    CHECK(p.defect.magnitude().max_abs() == 0.0);
    CHECK(p.residual == 0.0);
  }
  SUBCASE("constant patch") {
    const auto one = ScalarField::from_function(
        g, [](double, double, double x3) { return x3 < 1.0 ? 1.0 : 0.0; });
    const VectorField3 v(one, 0.5 * one, ScalarField::zeros(g));
    const CetParts p = cet_decompose(v, 3 * h);
    // Layers whose stencil stays inside the patch.
    CHECK(max_abs_inner(p.remainder.magnitude(), 3, 28) < 1e-15);
    CHECK(max_abs_inner(p.defect.magnitude(), 3, 28) < 1e-15);
    CHECK(max_abs_inner((p.lhs - p.main).magnitude(), 3, 28) < 1e-15);
  }
  SUBCASE("curl field identity") {
    const VectorField3 v = curl_field(42, 3, 1.0, 10, g);
    for (double eps : {2 * h, 4 * h}) CHECK(cet_decompose(v, eps).residual <= 1e-12);
  }
}

TEST_CASE("J terms") {
  const double h = 1.0 / 32.0;
  const HalfSpaceGrid g(32, 32, 48, h);
  SUBCASE("zero field") {
    const JTerms t = j_terms(VectorField3::zeros(g), 2 * h);
    CHECK(t.j1 == 0.0);
    CHECK(t.j2 == 0.0);
    CHECK(t.j3 == 0.0);
    CHECK(t.sum_residual == 0.0);
  }
  SUBCASE("shear field contracts to zero") {
    const VectorField3 v = power_field(0.5, g, 12);
    const JTerms t = j_terms(v, 4 * h);
    CHECK(t.j1 == 0.0);
    CHECK(t.j2 == 0.0);
    CHECK(t.j3 == 0.0);
    CHECK(t.direct == 0.0);
  }
  SUBCASE("sum rule on a curl field") {
    const VectorField3 v = curl_field(42, 2, 1.0, 14, g);
    for (double eps : {4 * h, 2 * h}) {
      const JTerms t = j_terms(v, eps);
      CHECK(t.sum_residual <= 1e-10);
      CHECK(t.identity_residual <= 1e-12);
      CHECK(t.epsilon == eps);
    }
  }
}

TEST_CASE("J bounds") {
  const double h = 1.0 / 32.0;
  const HalfSpaceGrid g(32, 32, 48, h);
  SUBCASE("zero field") {
    const JBounds b = j_bounds(VectorField3::zeros(g), 0.5, 0.0);
    CHECK(b.b1 == 0.0);
    CHECK(b.b2 == 0.0);
    CHECK(b.b3 == 0.0);
  }
  SUBCASE("closed form") {
    const JBounds b = j_bounds_from_norms(2.0, 3.0, 4.0, 0.5, 1.5);
    const double crho = std::sqrt(standard_kernel().c_rho);
    CHECK(b.b1 == doctest::Approx(1.5 * 2.0 * 8.0 * std::sqrt(3.0)));
    CHECK(b.b2 == doctest::Approx(crho * std::pow(2.0, 1.5) * std::sqrt(2.0) * std::sqrt(3.0) * 8.0));
    CHECK(b.b3 == doctest::Approx(crho * 2.0 * std::sqrt(3.0) * 8.0));
  }
  SUBCASE("J2 and J3 stay below their bounds") {
    const VectorField3 v = curl_field(3, 2, 1.0, 14, g);
    const double v0 = lp_norm(v, 2.0);
    const JBounds b = j_bounds(v, 0.5, v0);
    for (double eps : {4 * h, 2 * h}) {
      const JTerms t = j_terms(v, eps);
      CHECK(std::abs(t.j2) <= 1.1 * b.b2);
      CHECK(std::abs(t.j3) <= 1.1 * b.b3);
    }
    // No eps enters the bounds.
    const JBounds again = j_bounds(v, 0.5, v0);
    CHECK(again.b2 == b.b2);
    CHECK(again.b3 == b.b3);
  }
  CHECK(error_of([] { (void)j_bounds_from_norms(1.0, 1.0, 1.0, 1.0); }) ==
        ErrorCode::invalid_exponent);
}

TEST_CASE("stencil moment stays below eps^theta") {
  const double h = 1.0 / 32.0;
  for (double m : {1.0, 2.0, 4.0, 8.0})
    for (double theta : {0.1875, 0.25, 0.5, 1.0}) {
      const auto s = make_stencil(standard_kernel(), m * h, h);
      CHECK(stencil_moment(*s, theta) <= std::pow(m * h, theta));
    }
}

TEST_CASE("J1 calibration on the reference field") {
  // The frozen constant is max |J1| / b1(c1 = 1) over these eps, so every
  // ratio must sit at or below 1 and the largest at 1.
  const double h = 1.0 / 32.0;
  const HalfSpaceGrid g(32, 32, 128, h);
  const VectorField3 v = curl_field(7, 1, 1.0, 20, g);
  const JBounds b = j_bounds(v, 0.5, lp_norm(v, 2.0), HolderMode::exact(), kCalibratedJ1Constant);
  double worst = 0.0;
  for (double eps : {2 * h, 4 * h, 8 * h}) {
    const double ratio = std::abs(j_terms(v, eps).j1) / b.b1;
    CHECK(ratio <= 1.1);
    worst = std::max(worst, ratio);
  }
  CHECK(worst == doctest::Approx(1.0).epsilon(1e-8));
}
