#pragma once

#include "json.hpp"
#include "mollify_lab/field.hpp"
#include "mollify_lab/field_ops.hpp"
#include "mollify_lab/kernel.hpp"
#include "mollify_lab/stencil.hpp"

namespace mollify_lab {

/// (v x v)_eps = v_eps x v_eps + r_eps(v, v) - (v - v_eps) x (v - v_eps).
struct CetParts {
  TensorField lhs;
  TensorField main;
  TensorField remainder;
  TensorField defect;
  /// max |lhs - (main + remainder - defect)| / max |lhs| (0 for a zero lhs).
  double residual = 0.0;
};

/// remainder(x) = sum_k w_k (v_bar(x - y_k) - v(x)) x (v_bar(x - y_k) - v(x)),
/// summed directly over the stencil.
CetParts cet_decompose(const VectorField3& v, double epsilon,
                       const MollifierKernel& kernel = standard_kernel());

/// Integrals of main, remainder and -defect against grad S_eps(v) (central
/// differences of S_eps(v)), and of lhs for the sum rule.
struct JTerms {
  double epsilon = 0.0;
  double j1 = 0.0;
  double j2 = 0.0;
  double j3 = 0.0;
  double sum = 0.0;
  double direct = 0.0;
  /// |sum - direct| / (|j1| + |j2| + |j3|), 0 when all three vanish.
  double sum_residual = 0.0;
  double identity_residual = 0.0;  // CetParts::residual
};
JTerms j_terms(const VectorField3& v, double epsilon,
               const MollifierKernel& kernel = standard_kernel());

/// Right-hand sides of the three J bounds. None depends on eps.
///   b1 = c1 [v] |v0|^(1+alpha) |grad v|^(1-alpha)
///   b2 = c_rho^alpha 2^(alpha+1) [v]^alpha |grad v|^(1-alpha) |v0|^(1+alpha)
///   b3 = c_rho^alpha [v] |v0|^(1+alpha) |grad v|^(1-alpha)
struct JBounds {
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  double seminorm = 0.0;
  double grad_l2 = 0.0;
  double v0_l2 = 0.0;
  double c1 = 1.0;
};
JBounds j_bounds_from_norms(double seminorm, double grad_l2, double v0_l2, double alpha,
                            double c1 = 1.0, const MollifierKernel& kernel = standard_kernel());
/// Measures [v]_alpha with `holder` and |grad v|_{L^2} with central differences.
JBounds j_bounds(const VectorField3& v, double alpha, double v0_l2,
                 HolderMode holder = HolderMode::exact(), double c1 = 1.0,
                 const MollifierKernel& kernel = standard_kernel());

/// Constant for b1 measured as max |J1| / b1(c1 = 1) on a reference field.
/// Frozen value from the curl field with seed 7, one mode, top margin 20 on a
/// 32 x 32 x 128 grid (h = 1/32), alpha 0.5, exact seminorm, eps in {2h, 4h, 8h}.
inline constexpr double kCalibratedJ1Constant = 1.8864832172e-04;

/// sum_k w_k |y_k|^theta, which must not exceed eps^theta since |y_k| < eps.
double stencil_moment(const DiscreteStencil& stencil, double theta);

nlohmann::json to_json(const JTerms& terms);
nlohmann::json to_json(const JBounds& bounds);

}  // namespace mollify_lab
