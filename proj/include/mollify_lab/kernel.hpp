#pragma once

namespace mollify_lab {

/// Radial bump rho(x) = C exp(-1/(1 - |x|^2)) on the open unit ball of R^3.
struct MollifierKernel {
  double C;      // unit-mass normalization
  double c_rho;  // integral of |grad rho|

  double operator()(double r2) const noexcept;     // rho at |x|^2 = r2
  double radial_slope(double r2) const noexcept;   // rho'(r) / r at |x|^2 = r2
};

/// Reference constants from 30-digit quadrature; the computed kernel must
/// reproduce them to 1e-6.
inline constexpr double kReferenceC = 2.26711673960832645841796949369;
inline constexpr double kReferenceCRho = 4.23055222323733337269651845652;

/// Kernel with C and c_rho from tanh-sinh quadrature, computed once.
const MollifierKernel& standard_kernel();

/// ||rho||_{L^p(R^3)} by quadrature, p >= 1.
double kernel_lp_norm(const MollifierKernel& kernel, double p);

}  // namespace mollify_lab
