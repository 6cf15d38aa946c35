#pragma once

#include <cstddef>

#include "mollify_lab/field.hpp"
#include "mollify_lab/kernel.hpp"
#include "mollify_lab/stencil.hpp"

namespace mollify_lab {

/// Node layers of the x3 shift 2 eps / h; misaligned_translation unless it is
/// an integer.
std::size_t translation_layers(double epsilon, double h);
/// ceil(eps / h).
std::size_t kernel_radius_nodes(double epsilon, double h);

/// rho_eps * u_bar on the grid nodes. Needs support_margin >= ceil(eps / h).
ScalarField mollify(const ScalarField& u, double epsilon,
                    const MollifierKernel& kernel = standard_kernel());
VectorField3 mollify(const VectorField3& u, double epsilon,
                     const MollifierKernel& kernel = standard_kernel());
TensorField mollify(const TensorField& u, double epsilon,
                    const MollifierKernel& kernel = standard_kernel());

/// (v x v)_eps, mollifying the six distinct entries once.
TensorField mollify_outer(const VectorField3& v, double epsilon,
                          const MollifierKernel& kernel = standard_kernel());

/// u_bar(x - 2 eps e3): layers move up by 2 eps / h, zeros enter from below.
ScalarField translate(const ScalarField& u, double epsilon);
VectorField3 translate(const VectorField3& u, double epsilon);

/// S_eps(u) = rho_eps * (translate(u)). Evaluated as one shifted stencil so
/// the box values are exact; same margin rule as mollify.
ScalarField conv_translate(const ScalarField& u, double epsilon,
                           const MollifierKernel& kernel = standard_kernel());
VectorField3 conv_translate(const VectorField3& u, double epsilon,
                            const MollifierKernel& kernel = standard_kernel());

/// grad(rho_eps * u_bar) through the gradient stencil.
VectorField3 mollify_gradient(const ScalarField& u, double epsilon,
                              const MollifierKernel& kernel = standard_kernel());

/// The two evaluations of grad S_eps(u): the gradient stencil applied to the
/// translated field, and central differences of S_eps(u).
struct GradientForms {
  TensorField kernel_form;
  TensorField difference_form;
};
GradientForms grad_conv_translate(const VectorField3& u, double epsilon,
                                  const MollifierKernel& kernel = standard_kernel());
/// Kernel form for a scalar.
VectorField3 grad_conv_translate_kernel(const ScalarField& u, double epsilon,
                                        const MollifierKernel& kernel = standard_kernel());

/// rho_eps * S_eps(u). Needs support_margin >= 2 ceil(eps / h). The inner S_eps
/// is evaluated on a padded grid, so the result is exact on every node.
ScalarField double_smooth(const ScalarField& u, double epsilon,
                          const MollifierKernel& kernel = standard_kernel());
VectorField3 double_smooth(const VectorField3& u, double epsilon,
                           const MollifierKernel& kernel = standard_kernel());

}  // namespace mollify_lab
