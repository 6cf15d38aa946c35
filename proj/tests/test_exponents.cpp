#include <cmath>
#include <random>

#include "doctest.h"
#include "mollify_lab/exponents.hpp"
#include "mollify_lab/field_ops.hpp"
#include "mollify_lab/synth.hpp"
#include "support.hpp"

using namespace mollify_lab;
using test_support::error_of;

TEST_CASE("beta0") {
  CHECK(std::abs(beta0(1.0 / 3.0) - 18.0 / 11.0) < 1e-12);
  CHECK(beta0(1.0 - 1e-12) == doctest::Approx(1.2));
  CHECK(beta0(1e-12) == doctest::Approx(2.0));
  CHECK(error_of([] { (void)beta0(1.0); }) == ErrorCode::invalid_exponent);
  CHECK(error_of([] { (void)beta0(0.0); }) == ErrorCode::invalid_exponent);
}

TEST_CASE("r window and Shinbrot s") {
  const OpenInterval w1 = r_window(1.0);
  CHECK(w1.empty());
  CHECK(w1.lo == doctest::Approx(4.0 / 3.0));
  CHECK_FALSE(w1.contains(4.0 / 3.0));
  const OpenInterval w15 = r_window(1.5);
  CHECK(w15.lo == doctest::Approx(8.0 / 7.0));
  CHECK(w15.hi == doctest::Approx(1.6));
  const OpenInterval w2 = r_window(2.0);
  CHECK(w2.lo == doctest::Approx(1.0));
  CHECK(w2.hi == doctest::Approx(2.0));

  CHECK(shinbrot_s(4.0 / 3.0, 2.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  // s tends to 1 at the upper end of the window.
  CHECK(shinbrot_s(2.0 - 1e-7, 2.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(shinbrot_s(1.6 - 1e-7, 1.5) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(error_of([] { (void)shinbrot_s(2.0, 2.0); }) == ErrorCode::invalid_exponent);
  CHECK(error_of([] { (void)r_window(2.5); }) == ErrorCode::invalid_exponent);
  CHECK(error_of([] { (void)r_window(0.5); }) == ErrorCode::invalid_exponent);
}

TEST_CASE("s of q is conjugate and consistent with r") {
  const ConjugatePair p = s_of_q(1.5, 1.8);
  CHECK(p.s == doctest::Approx(2.7 / 2.2).epsilon(1e-14));
  CHECK(p.s_prime == doctest::Approx(5.4).epsilon(1e-14));

  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> ub(1.0, 2.0), uu(0.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const double beta = ub(rng);
    const OpenInterval w = q_window(beta);
    const double q = w.lo + (w.hi - w.lo) * (0.01 + 0.98 * uu(rng));
    const ConjugatePair c = s_of_q(q, beta);
    CHECK(std::abs(1.0 / c.s + 1.0 / c.s_prime - 1.0) < 1e-12);
    CHECK(test_support::rel_diff(r_of_s(c.s, beta), r_of_q(q, beta)) < 1e-12);
    const double r = r_of_q(q, beta);
    CHECK(r > 1.0);
    CHECK(r < q);
    CHECK(c.s > 1.0);
    CHECK(c.s < 2.0);
  }
  CHECK(s_of_q(2.0 - 1e-8, 1.5).s_prime > 1e8);
}

TEST_CASE("r of q") {
  CHECK(r_of_q(1.5, 2.0) == doctest::Approx(1.5).epsilon(1e-14));
  // Endpoint q = 4 / (2 + beta) is excluded; r tends to 1 there.
  const double beta = 1.6;
  CHECK(r_of_q(4.0 / (2.0 + beta) + 1e-8, beta) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(error_of([&] { (void)r_of_q(4.0 / (2.0 + beta), beta); }) == ErrorCode::invalid_exponent);
  CHECK(error_of([] { (void)r_of_q(2.0, 1.5); }) == ErrorCode::invalid_exponent);
}

TEST_CASE("eps margin") {
  CHECK(est_eps_margin(0.5, 1.5, 2.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(optimized_margin(0.5, 1.6) == doctest::Approx(0.1).epsilon(1e-13));
  CHECK(est_eps_margin(0.5, 4.0 / 3.6 + 1e-8, 1.6) == doctest::Approx(0.1).epsilon(1e-6));
  for (double alpha : {0.2, 0.5, 0.9})
    CHECK(std::abs(optimized_margin(alpha, beta0(alpha))) < 1e-12);
  // alpha = 0.5 and beta = 1.4 < beta0 = 1.5: negative over the whole window.
  const OpenInterval w = q_window(1.4);
  for (int n = 1; n < 100; ++n) {
    const double q = w.lo + (w.hi - w.lo) * n / 100.0;
    CHECK(est_eps_margin(0.5, q, 1.4) < 0.0);
  }
  // Decreasing in q, so the lower end is optimal.
  CHECK(est_eps_margin(0.5, 1.2, 1.9) > est_eps_margin(0.5, 1.5, 1.9));
}

TEST_CASE("margin threshold recovers beta0") {
  CHECK(std::abs(margin_threshold(1.0 / 3.0) - 18.0 / 11.0) < 1e-10);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.01, 0.99);
  for (int n = 0; n < 20; ++n) {
    const double alpha = ua(rng);
    CHECK(std::abs(margin_threshold(alpha) - 6.0 / (3.0 + 2.0 * alpha)) < 1e-10);
  }
}

TEST_CASE("margin threshold condition") {
  CHECK(remark37_check(2.0));
  CHECK_FALSE(remark37_check(1.9));
  CHECK(remark37_check(3.0));
  for (int n = 0; n < 10000; ++n) {
    const double beta = 1.0 + 2.0 * n / 9999.0;
    CHECK(remark37_check(beta) == (beta >= 2.0));
  }
}

TEST_CASE("Shinbrot pointwise bound") {
  CHECK(shinbrot_pointwise_bound(1.0, 1.0, 1.0, 1.0, 1.5) == doctest::Approx(1.0));
  // r -> 1: the v_linf exponent vanishes.
  CHECK(shinbrot_pointwise_bound(1.0, 1e6, 2.0, 3.0, 1.0 + 1e-12) == doctest::Approx(6.0).epsilon(1e-8));
  CHECK(error_of([] { (void)shinbrot_pointwise_bound(2.0, 1.0, 1.0, 1.0, 1.5); }) ==
        ErrorCode::invalid_argument);
  CHECK(error_of([] { (void)shinbrot_pointwise_bound(1.0, 1.0, 1.0, 1.0, 2.0); }) ==
        ErrorCode::invalid_exponent);

  const HalfSpaceGrid g(16, 16, 24, 1.0 / 16.0);
  for (const VectorField3& v : {curl_field(3, 2, 1.0, 6, g),
                                shear_field([](double x) { return x * (1.0 - x) * (x < 1.0); }, g)}) {
    const double l2 = lp_norm(v, 2.0), linf = lp_norm(v, kInfinity);
    const double grad = lp_norm(gradient(v), 2.0);
    for (double r : {1.2, 1.5})
      CHECK(lp_norm(convective_term(v), r) <= shinbrot_pointwise_bound(l2, linf, grad, l2, r));
  }
}

TEST_CASE("exponent bundle") {
  const ExponentBundle b = make_bundle(0.5, 1.9);
  CHECK(b.beta0 == doctest::Approx(1.5));
  CHECK(b.valid.beta_above_threshold);
  CHECK(b.valid.q_in_window);
  CHECK(b.valid.conjugate);
  CHECK(b.valid.r_forms_agree);
  CHECK(b.valid.r_in_1_q);
  CHECK(b.valid.s_in_1_2);
  CHECK(b.valid.margin_positive);
  CHECK(b.valid.theorem_r_in_window);
  CHECK(b.valid.theorem_s_above_1);
  CHECK(b.q == doctest::Approx(0.5 * (4.0 / 3.9 + 2.0)));

  const ExponentBundle low = make_bundle(0.5, 1.2);
  CHECK_FALSE(low.valid.beta_above_threshold);
  CHECK_FALSE(low.valid.margin_positive);

  const nlohmann::json j = to_json(b);
  CHECK(j.at("margin_sign") == "positive");
  CHECK(j.at("valid").at("conjugate") == true);
  CHECK(to_json(low).at("margin_sign") == "negative");

  const ExponentBundle outside = make_bundle(0.5, 1.9, 2.5);
  CHECK_FALSE(outside.valid.q_in_window);
  CHECK_FALSE(outside.valid.conjugate);
  CHECK(error_of([] { (void)make_bundle(0.5, 2.5); }) == ErrorCode::invalid_exponent);
}

TEST_CASE("window monotonicity in beta") {
  double prev_lo = 10.0, prev_hi = 0.0;
  for (int n = 0; n <= 100; ++n) {
    const double beta = 1.0 + n / 100.0;
    const OpenInterval w = r_window(beta);
    CHECK(w.lo < prev_lo);
    CHECK(w.hi > prev_hi);
    prev_lo = w.lo;
    prev_hi = w.hi;
  }
}
