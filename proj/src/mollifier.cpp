#include "mollify_lab/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mollify_lab/error.hpp"
#include "mollify_lab/field_ops.hpp"
#include "stencil_engine.hpp"

namespace mollify_lab {

namespace {

void require_margin(const ScalarField& u, std::size_t needed, const char* op) {
  if (u.is_zero() || u.support_margin() >= needed) return;
  throw LabError(ErrorCode::truncation_contamination,
                 std::string(op) + " needs " + std::to_string(needed) +
                     " zero top layers, field has " + std::to_string(u.support_margin()));
}

ScalarField run(const ScalarField& u, const DiscreteStencil& s, std::span<const double> weights,
                std::size_t shift) {
  std::vector<double> out(u.grid().size(), 0.0);
  if (!u.is_zero())
    detail::apply(u.grid(), u.values(), out, s.offsets, weights, static_cast<int>(shift),
                  u.is_tangentially_invariant());
  return ScalarField(u.grid(), std::move(out));
}

// Same field on a grid with `extra` additional zero layers on top.
ScalarField pad_top(const ScalarField& u, std::size_t extra) {
  const HalfSpaceGrid& g = u.grid();
  HalfSpaceGrid big(g.n1(), g.n2(), g.n3() + extra, g.h());
  std::vector<double> v(big.size(), 0.0);
  std::copy(u.values().begin(), u.values().end(), v.begin());
  return ScalarField(big, std::move(v));
}

ScalarField crop_top(const ScalarField& u, const HalfSpaceGrid& target) {
  std::vector<double> v(u.values().begin(),
                        u.values().begin() + static_cast<std::ptrdiff_t>(target.size()));
  return ScalarField(target, std::move(v));
}

}  // namespace

std::size_t kernel_radius_nodes(double epsilon, double h) {
  return static_cast<std::size_t>(std::ceil(epsilon / h - 1e-9));
}

std::size_t translation_layers(double epsilon, double h) {
  const double m = 2.0 * epsilon / h;
  const double r = std::round(m);
  if (!(epsilon >= 0.0) || std::abs(m - r) > 1e-9)
    throw LabError(ErrorCode::misaligned_translation,
                   "2 eps / h = " + std::to_string(m) + " is not an integer");
  return static_cast<std::size_t>(r);
}

ScalarField mollify(const ScalarField& u, double epsilon, const MollifierKernel& kernel) {
  const auto s = make_stencil(kernel, epsilon, u.grid().h());
  require_margin(u, static_cast<std::size_t>(s->radius_nodes), "mollify");
  return run(u, *s, s->weights, 0);
}

VectorField3 mollify(const VectorField3& u, double epsilon, const MollifierKernel& kernel) {
  return {mollify(u[0], epsilon, kernel), mollify(u[1], epsilon, kernel),
          mollify(u[2], epsilon, kernel)};
}

TensorField mollify(const TensorField& u, double epsilon, const MollifierKernel& kernel) {
  std::array<ScalarField, 9> e = {u(0, 0), u(0, 1), u(0, 2), u(1, 0), u(1, 1),
                                  u(1, 2), u(2, 0), u(2, 1), u(2, 2)};
  for (auto& x : e) x = mollify(x, epsilon, kernel);
  return TensorField(std::move(e));
}

TensorField mollify_outer(const VectorField3& v, double epsilon, const MollifierKernel& kernel) {
  std::array<ScalarField, 9> e = {v[0], v[0], v[0], v[0], v[0], v[0], v[0], v[0], v[0]};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j) {
      e[3 * i + j] = mollify(v[i] * v[j], epsilon, kernel);
      e[3 * j + i] = e[3 * i + j];
    }
  return TensorField(std::move(e));
}

ScalarField translate(const ScalarField& u, double epsilon) {
  const std::size_t shift = translation_layers(epsilon, u.grid().h());
  const HalfSpaceGrid& g = u.grid();
  std::vector<double> out(g.size(), 0.0);
  const std::size_t layer = g.layer_size();
  for (std::size_t k = shift; k < g.n3(); ++k)
    std::copy_n(u.values().begin() + static_cast<std::ptrdiff_t>((k - shift) * layer), layer,
                out.begin() + static_cast<std::ptrdiff_t>(k * layer));
  return ScalarField(g, std::move(out));
}

VectorField3 translate(const VectorField3& u, double epsilon) {
  return {translate(u[0], epsilon), translate(u[1], epsilon), translate(u[2], epsilon)};
}

ScalarField conv_translate(const ScalarField& u, double epsilon, const MollifierKernel& kernel) {
  const std::size_t shift = translation_layers(epsilon, u.grid().h());
  const auto s = make_stencil(kernel, epsilon, u.grid().h());
  require_margin(u, static_cast<std::size_t>(s->radius_nodes), "conv_translate");
  return run(u, *s, s->weights, shift);
}

VectorField3 conv_translate(const VectorField3& u, double epsilon, const MollifierKernel& kernel) {
  return {conv_translate(u[0], epsilon, kernel), conv_translate(u[1], epsilon, kernel),
          conv_translate(u[2], epsilon, kernel)};
}

VectorField3 mollify_gradient(const ScalarField& u, double epsilon, const MollifierKernel& kernel) {
  const auto s = make_stencil(kernel, epsilon, u.grid().h());
  require_margin(u, static_cast<std::size_t>(s->radius_nodes), "mollify_gradient");
  return {run(u, *s, s->grad_weights[0], 0), run(u, *s, s->grad_weights[1], 0),
          run(u, *s, s->grad_weights[2], 0)};
}

VectorField3 grad_conv_translate_kernel(const ScalarField& u, double epsilon,
                                        const MollifierKernel& kernel) {
  const std::size_t shift = translation_layers(epsilon, u.grid().h());
  const auto s = make_stencil(kernel, epsilon, u.grid().h());
  require_margin(u, static_cast<std::size_t>(s->radius_nodes), "grad_conv_translate");
  return {run(u, *s, s->grad_weights[0], shift), run(u, *s, s->grad_weights[1], shift),
          run(u, *s, s->grad_weights[2], shift)};
}

GradientForms grad_conv_translate(const VectorField3& u, double epsilon,
                                  const MollifierKernel& kernel) {
  std::array<ScalarField, 9> a = {u[0], u[0], u[0], u[0], u[0], u[0], u[0], u[0], u[0]};
  std::array<ScalarField, 9> b = a;
  for (std::size_t i = 0; i < 3; ++i) {
    const VectorField3 gk = grad_conv_translate_kernel(u[i], epsilon, kernel);
    const ScalarField si = conv_translate(u[i], epsilon, kernel);
    for (std::size_t j = 0; j < 3; ++j) {
      a[3 * i + j] = gk[j];
      b[3 * i + j] = partial(si, j);
    }
  }
  return {TensorField(std::move(a)), TensorField(std::move(b))};
}

ScalarField double_smooth(const ScalarField& u, double epsilon, const MollifierKernel& kernel) {
  const std::size_t R = kernel_radius_nodes(epsilon, u.grid().h());
  const std::size_t shift = translation_layers(epsilon, u.grid().h());
  const auto s = make_stencil(kernel, epsilon, u.grid().h());
  require_margin(u, 2 * R, "double_smooth");
  if (u.is_zero()) return ScalarField::zeros(u.grid());
  const ScalarField padded = pad_top(u, R);
  const ScalarField inner = run(padded, *s, s->weights, shift);
  const ScalarField outer = run(inner, *s, s->weights, 0);
  return crop_top(outer, u.grid());
}

VectorField3 double_smooth(const VectorField3& u, double epsilon, const MollifierKernel& kernel) {
  return {double_smooth(u[0], epsilon, kernel), double_smooth(u[1], epsilon, kernel),
          double_smooth(u[2], epsilon, kernel)};
}

}  // namespace mollify_lab
