#include "mollify_lab/commutator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mollify_lab/error.hpp"
#include "mollify_lab/mollifier.hpp"
#include "mollify_lab/parallel.hpp"

namespace mollify_lab {

namespace {

constexpr std::array<std::array<std::size_t, 2>, 6> kPairs = {
    {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};

TensorField symmetric(const HalfSpaceGrid& g, std::array<std::vector<double>, 6>& parts) {
  std::array<ScalarField, 6> f = {ScalarField(g, std::move(parts[0])), ScalarField(g, std::move(parts[1])),
                                  ScalarField(g, std::move(parts[2])), ScalarField(g, std::move(parts[3])),
                                  ScalarField(g, std::move(parts[4])), ScalarField(g, std::move(parts[5]))};
  return TensorField({f[0], f[1], f[2], f[1], f[3], f[4], f[2], f[4], f[5]});
}

// sum_k w_k dv_i dv_j with dv = v_bar(x - y_k) - v(x), node by node.
TensorField remainder_general(const VectorField3& v, const DiscreteStencil& s) {
  const HalfSpaceGrid& g = v.grid();
  const std::size_t n1 = g.n1(), n2 = g.n2(), n3 = g.n3(), layer = g.layer_size();
  const double* c0 = v[0].values().data();
  const double* c1 = v[1].values().data();
  const double* c2 = v[2].values().data();
  std::array<std::vector<double>, 6> out;
  for (auto& o : out) o.assign(g.size(), 0.0);
  parallel_for(0, n3, [&](std::size_t k) {
    for (std::size_t t = 0; t < s.offsets.size(); ++t) {
      const auto& o = s.offsets[t];
      const double w = s.weights[t];
      const long ks = static_cast<long>(k) - o.c;
      const bool inside = ks >= 0 && ks < static_cast<long>(n3);
      for (std::size_t j = 0; j < n2; ++j) {
        const long jl = static_cast<long>(j) - o.b;
        const std::size_t js = static_cast<std::size_t>(((jl % static_cast<long>(n2)) + static_cast<long>(n2)) %
                                                        static_cast<long>(n2));
        const std::size_t row = k * layer + j * n1;
        const std::size_t src_row = inside ? static_cast<std::size_t>(ks) * layer + js * n1 : 0;
        const long ln1 = static_cast<long>(n1);
        const std::size_t shift = static_cast<std::size_t>(((-o.a % ln1) + ln1) % ln1);
        for (std::size_t i = 0; i < n1; ++i) {
          std::size_t is = i + shift;
          if (is >= n1) is -= n1;
          const std::size_t p = row + i;
          double d[3];
          if (inside) {
            const std::size_t q = src_row + is;
            d[0] = c0[q] - c0[p];
            d[1] = c1[q] - c1[p];
            d[2] = c2[q] - c2[p];
          } else {
            d[0] = -c0[p];
            d[1] = -c1[p];
            d[2] = -c2[p];
          }
          for (std::size_t n = 0; n < 6; ++n) out[n][p] += w * d[kPairs[n][0]] * d[kPairs[n][1]];
        }
      }
    }
  });
  return symmetric(g, out);
}

// Layer-constant input: dv depends only on the tap's c, so taps are grouped.
TensorField remainder_layered(const VectorField3& v, const DiscreteStencil& s) {
  const HalfSpaceGrid& g = v.grid();
  const std::size_t n3 = g.n3(), layer = g.layer_size();
  std::map<int, double> by_c;
  for (std::size_t t = 0; t < s.offsets.size(); ++t) by_c[s.offsets[t].c] += s.weights[t];
  std::array<std::vector<double>, 6> out;
  for (auto& o : out) o.assign(g.size(), 0.0);
  for (std::size_t k = 0; k < n3; ++k) {
    double acc[6] = {};
    for (const auto& [c, w] : by_c) {
      const long ks = static_cast<long>(k) - c;
      const bool inside = ks >= 0 && ks < static_cast<long>(n3);
      double d[3];
      for (std::size_t m = 0; m < 3; ++m) {
        const double here = v[m].values()[k * layer];
        d[m] = (inside ? v[m].values()[static_cast<std::size_t>(ks) * layer] : 0.0) - here;
      }
      for (std::size_t n = 0; n < 6; ++n) acc[n] += w * d[kPairs[n][0]] * d[kPairs[n][1]];
    }
    for (std::size_t n = 0; n < 6; ++n)
      std::fill_n(out[n].begin() + static_cast<std::ptrdiff_t>(k * layer), layer, acc[n]);
  }
  return symmetric(g, out);
}

double max_entry(const TensorField& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m = std::max(m, t(i, j).max_abs());
  return m;
}

}  // namespace

CetParts cet_decompose(const VectorField3& v, double epsilon, const MollifierKernel& kernel) {
  const auto s = make_stencil(kernel, epsilon, v.grid().h());
  TensorField lhs = mollify_outer(v, epsilon, kernel);  // also enforces the margin rule
  const VectorField3 v_eps = mollify(v, epsilon, kernel);
  TensorField main = TensorField::outer(v_eps, v_eps);
  const bool layered = v[0].is_tangentially_invariant() && v[1].is_tangentially_invariant() &&
                       v[2].is_tangentially_invariant();
  TensorField remainder = v.is_zero()      ? TensorField::zeros(v.grid())
                          : layered        ? remainder_layered(v, *s)
                                           : remainder_general(v, *s);
  const VectorField3 gap = v - v_eps;
  TensorField defect = TensorField::outer(gap, gap);
  const double scale = max_entry(lhs);
  const double diff = max_entry(lhs - ((main + remainder) - defect));
  const double residual = scale > 0.0 ? diff / scale : diff;
  return {std::move(lhs), std::move(main), std::move(remainder), std::move(defect), residual};
}

JTerms j_terms(const VectorField3& v, double epsilon, const MollifierKernel& kernel) {
  const CetParts parts = cet_decompose(v, epsilon, kernel);
  const TensorField grad_s = gradient(conv_translate(v, epsilon, kernel));
  JTerms t;
  t.epsilon = epsilon;
  t.j1 = contract_integral(parts.main, grad_s);
  t.j2 = contract_integral(parts.remainder, grad_s);
  t.j3 = -contract_integral(parts.defect, grad_s);
  t.sum = t.j1 + t.j2 + t.j3;
  t.direct = contract_integral(parts.lhs, grad_s);
  const double scale = std::abs(t.j1) + std::abs(t.j2) + std::abs(t.j3);
  t.sum_residual = scale > 0.0 ? std::abs(t.sum - t.direct) / scale : std::abs(t.sum - t.direct);
  t.identity_residual = parts.residual;
  return t;
}

JBounds j_bounds_from_norms(double seminorm, double grad_l2, double v0_l2, double alpha,
                            double c1, const MollifierKernel& kernel) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw LabError(ErrorCode::invalid_exponent, "alpha must lie in (0, 1)");
  JBounds b;
  b.seminorm = seminorm;
  b.grad_l2 = grad_l2;
  b.v0_l2 = v0_l2;
  b.c1 = c1;
  const double energy = std::pow(v0_l2, 1.0 + alpha);
  const double grad = std::pow(grad_l2, 1.0 - alpha);
  const double crho = std::pow(kernel.c_rho, alpha);
  b.b1 = c1 * seminorm * energy * grad;
  b.b2 = crho * std::pow(2.0, alpha + 1.0) * std::pow(seminorm, alpha) * grad * energy;
  b.b3 = crho * seminorm * energy * grad;
  return b;
}

JBounds j_bounds(const VectorField3& v, double alpha, double v0_l2, HolderMode holder, double c1,
                 const MollifierKernel& kernel) {
  return j_bounds_from_norms(holder_seminorm(v, alpha, holder), lp_norm(gradient(v), 2.0), v0_l2,
                             alpha, c1, kernel);
}

double stencil_moment(const DiscreteStencil& stencil, double theta) {
  double m = 0.0;
  for (std::size_t t = 0; t < stencil.offsets.size(); ++t) {
    const auto& o = stencil.offsets[t];
    const double r = stencil.h * std::sqrt(static_cast<double>(o.a * o.a + o.b * o.b + o.c * o.c));
    m += stencil.weights[t] * std::pow(r, theta);
  }
  return m;
}

nlohmann::json to_json(const JTerms& t) {
  return {{"epsilon", t.epsilon},          {"j1", t.j1},
          {"j2", t.j2},                    {"j3", t.j3},
          {"sum", t.sum},                  {"direct", t.direct},
          {"sum_residual", t.sum_residual}, {"residual", t.identity_residual}};
}

nlohmann::json to_json(const JBounds& b) {
  return {{"b1", b.b1},           {"b2", b.b2},          {"b3", b.b3},  {"seminorm", b.seminorm},
          {"grad_l2", b.grad_l2}, {"v0_l2", b.v0_l2}, {"c1", b.c1}};
}

}  // namespace mollify_lab
