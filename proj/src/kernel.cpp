#include "mollify_lab/kernel.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "mollify_lab/error.hpp"

namespace mollify_lab {

namespace {

double bump(double r2) noexcept { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

MollifierKernel compute_kernel() {
  using boost::math::constants::pi;
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double mass =
      4.0 * pi<double>() * integrator.integrate([](double r) { return r * r * bump(r * r); }, 0.0, 1.0);
  const double C = 1.0 / mass;
  // int |grad rho| = -4 pi int r^2 rho'(r) dr = 8 pi int r rho(r) dr.
  const double c_rho =
      8.0 * pi<double>() * C * integrator.integrate([](double r) { return r * bump(r * r); }, 0.0, 1.0);
  if (std::abs(C - kReferenceC) > 1e-6 * kReferenceC ||
      std::abs(c_rho - kReferenceCRho) > 1e-6 * kReferenceCRho)
    throw LabError(ErrorCode::invalid_argument, "kernel quadrature disagrees with reference constants");
  return {C, c_rho};
}

}  // namespace

double MollifierKernel::operator()(double r2) const noexcept { return C * bump(r2); }

double MollifierKernel::radial_slope(double r2) const noexcept {
  if (r2 >= 1.0) return 0.0;
  const double d = 1.0 - r2;
  return -2.0 * C * bump(r2) / (d * d);
}

const MollifierKernel& standard_kernel() {
  static const MollifierKernel kernel = compute_kernel();
  return kernel;
}

double kernel_lp_norm(const MollifierKernel& kernel, double p) {
  using boost::math::constants::pi;
  if (!(p >= 1.0)) throw LabError(ErrorCode::invalid_exponent, "kernel norm needs p >= 1");
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double integral = integrator.integrate(
      [&](double r) { return r * r * std::pow(kernel(r * r), p); }, 0.0, 1.0);
  return std::pow(4.0 * pi<double>() * integral, 1.0 / p);
}

}  // namespace mollify_lab
