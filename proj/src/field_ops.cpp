#include "mollify_lab/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mollify_lab/error.hpp"
#include "mollify_lab/parallel.hpp"
#include "mollify_lab/summation.hpp"
#include "stencil_engine.hpp"

namespace mollify_lab {

namespace {

void require_exponent(double r) {
  if (!(r >= 1.0)) throw LabError(ErrorCode::invalid_exponent, "lp_norm needs r >= 1");
}

// Quadrature of g(values[n]) with deterministic layer-then-stack pairwise sums.
template <class G>
double quadrature(const HalfSpaceGrid& grid, std::span<const double> values, G&& g) {
  const std::size_t layer = grid.layer_size();
  std::vector<double> layer_sum(grid.n3());
  parallel_for(0, grid.n3(), [&](std::size_t k) {
    std::vector<double> buf(layer);
    const double* v = values.data() + k * layer;
    for (std::size_t m = 0; m < layer; ++m) buf[m] = g(v[m]);
    layer_sum[k] = grid.quadrature_weight(k) * pairwise_sum(buf);
  });
  return pairwise_sum(layer_sum);
}

double lp_of_values(const HalfSpaceGrid& grid, std::span<const double> abs_values, double r) {
  require_exponent(r);
  if (std::isinf(r)) {
    double m = 0.0;
    for (double v : abs_values) m = std::max(m, v);
    return m;
  }
  if (r == 1.0) return quadrature(grid, abs_values, [](double v) { return v; });
  if (r == 2.0) return std::sqrt(quadrature(grid, abs_values, [](double v) { return v * v; }));
  return std::pow(quadrature(grid, abs_values, [r](double v) { return std::pow(v, r); }),
                  1.0 / r);
}

}  // namespace

double lp_norm(const ScalarField& f, double r) {
  require_exponent(r);
  const ScalarField a = abs(f);
  return lp_of_values(f.grid(), a.values(), r);
}

double lp_norm(const VectorField3& f, double r) {
  require_exponent(r);
  const ScalarField m = f.magnitude();
  return lp_of_values(f.grid(), m.values(), r);
}

double lp_norm(const TensorField& f, double r) {
  require_exponent(r);
  const ScalarField m = f.magnitude();
  return lp_of_values(f.grid(), m.values(), r);
}

double integrate(const ScalarField& f) {
  return quadrature(f.grid(), f.values(), [](double v) { return v; });
}

double l2_inner(const ScalarField& f, const ScalarField& g) { return integrate(f * g); }

double l2_inner(const VectorField3& f, const VectorField3& g) {
  require_same_grid(f.grid(), g.grid());
  std::vector<double> dot(f.grid().size());
  for (std::size_t n = 0; n < dot.size(); ++n)
    dot[n] = f[0].values()[n] * g[0].values()[n] + f[1].values()[n] * g[1].values()[n] +
             f[2].values()[n] * g[2].values()[n];
  return quadrature(f.grid(), dot, [](double v) { return v; });
}

double contract_integral(const TensorField& a, const TensorField& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> dot(a.grid().size(), 0.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const auto x = a(i, j).values();
      const auto y = b(i, j).values();
      for (std::size_t n = 0; n < dot.size(); ++n) dot[n] += x[n] * y[n];
    }
  return quadrature(a.grid(), dot, [](double v) { return v; });
}

// ---------------------------------------------------------------------------
// Hoelder seminorm

namespace {

struct Separation {
  long di, dj, dk;
  double dist;  // node units
};

long min_image(long d, long n) {
  d %= n;
  if (d < 0) d += n;
  if (2 * d > n) d -= n;
  return d;
}

class HolderSearch {
 public:
  HolderSearch(const HalfSpaceGrid& grid, std::vector<std::span<const double>> comps, double alpha)
      : grid_(grid), comps_(std::move(comps)), alpha_(alpha) {}

  double diff(std::size_t p, std::size_t q) const {
    if (comps_.size() == 1) return std::abs(comps_[0][p] - comps_[0][q]);
    double s = 0.0;
    for (const auto& c : comps_) {
      const double d = c[p] - c[q];
      s += d * d;
    }
    return std::sqrt(s);
  }

  double norm_at(std::size_t p) const {
    if (comps_.size() == 1) return std::abs(comps_[0][p]);
    double s = 0.0;
    for (const auto& c : comps_) s += c[p] * c[p];
    return std::sqrt(s);
  }

  double denom(double dist_nodes) const { return std::pow(grid_.h() * dist_nodes, alpha_); }

  // Upper bound for any |u(x) - u(y)|, including y in the zero extension.
  double oscillation() const {
    double s = 0.0;
    for (const auto& c : comps_) {
      double lo = 0.0, hi = 0.0;
      for (double v : c) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      s += (hi - lo) * (hi - lo);
    }
    return std::sqrt(s);
  }

  // Pairs between a node and the nearest zero-extension node straight below
  // or above it.
  double extension_pairs(double max_dist) const {
    const std::size_t layer = grid_.layer_size();
    double best = 0.0;
    for (std::size_t k = 0; k < grid_.n3(); ++k) {
      const double below = static_cast<double>(k + 1);
      const double above = static_cast<double>(grid_.n3() - k);
      const double d = std::min(below, above);
      if (d > max_dist) continue;
      double peak = 0.0;
      for (std::size_t m = 0; m < layer; ++m) peak = std::max(peak, norm_at(k * layer + m));
      best = std::max(best, peak / denom(d));
    }
    return best;
  }

  double max_diff(const Separation& s) const {
    const std::size_t n1 = grid_.n1();
    const std::size_t n2 = grid_.n2();
    const long ln1 = static_cast<long>(n1);
    const long ln2 = static_cast<long>(n2);
    const std::size_t si = static_cast<std::size_t>(((s.di % ln1) + ln1) % ln1);
    double m = 0.0;
    for (std::size_t k = 0; k + static_cast<std::size_t>(s.dk) < grid_.n3(); ++k) {
      const std::size_t k2 = k + static_cast<std::size_t>(s.dk);
      for (std::size_t j = 0; j < n2; ++j) {
        const std::size_t j2 =
            static_cast<std::size_t>(((static_cast<long>(j) + s.dj) % ln2 + ln2) % ln2);
        const std::size_t p0 = grid_.index(0, j, k);
        const std::size_t q0 = grid_.index(0, j2, k2);
        for (std::size_t i = 0; i < n1; ++i) {
          std::size_t i2 = i + si;
          if (i2 >= n1) i2 -= n1;
          m = std::max(m, diff(p0 + i, q0 + i2));
        }
      }
    }
    return m;
  }

  double search(double max_dist, bool layered) const {
    std::vector<Separation> seps;
    const long n1 = static_cast<long>(grid_.n1());
    const long n2 = static_cast<long>(grid_.n2());
    const long n3 = static_cast<long>(grid_.n3());
    const long ilo = layered ? 0 : -(n1 - 1) / 2, ihi = layered ? 0 : n1 / 2;
    const long jlo = layered ? 0 : -(n2 - 1) / 2, jhi = layered ? 0 : n2 / 2;
    for (long dk = 0; dk < n3; ++dk)
      for (long dj = jlo; dj <= jhi; ++dj)
        for (long di = ilo; di <= ihi; ++di) {
          if (dk == 0 && (dj < 0 || (dj == 0 && di <= 0))) continue;
          const double d = std::sqrt(static_cast<double>(di * di + dj * dj + dk * dk));
          if (d > max_dist) continue;
          seps.push_back({di, dj, dk, d});
        }
    std::stable_sort(seps.begin(), seps.end(),
                     [](const Separation& a, const Separation& b) { return a.dist < b.dist; });
    double best = extension_pairs(max_dist);
    const double osc = oscillation();
    for (const auto& s : seps) {
      if (osc / denom(s.dist) <= best) break;
      best = std::max(best, max_diff(s) / denom(s.dist));
    }
    return best;
  }

  double sampled(std::uint64_t seed, std::size_t n_pairs) const {
    std::mt19937_64 rng(seed);
    const std::uint64_t n = grid_.size();
    const long n1 = static_cast<long>(grid_.n1());
    const long n2 = static_cast<long>(grid_.n2());
    double best = 0.0;
    for (std::size_t t = 0; t < n_pairs; ++t) {
      const std::size_t p = static_cast<std::size_t>(rng() % n);
      const std::size_t q = static_cast<std::size_t>(rng() % n);
      if (p == q) continue;
      const long pi = static_cast<long>(p % grid_.n1());
      const long pj = static_cast<long>((p / grid_.n1()) % grid_.n2());
      const long pk = static_cast<long>(p / grid_.layer_size());
      const long qi = static_cast<long>(q % grid_.n1());
      const long qj = static_cast<long>((q / grid_.n1()) % grid_.n2());
      const long qk = static_cast<long>(q / grid_.layer_size());
      const long di = min_image(qi - pi, n1);
      const long dj = min_image(qj - pj, n2);
      const long dk = qk - pk;
      const double d = std::sqrt(static_cast<double>(di * di + dj * dj + dk * dk));
      if (d == 0.0) continue;
      best = std::max(best, diff(p, q) / denom(d));
    }
    return best;
  }

 private:
  const HalfSpaceGrid& grid_;
  std::vector<std::span<const double>> comps_;
  double alpha_;
};

double holder_dispatch(const HalfSpaceGrid& grid, std::vector<std::span<const double>> comps,
                       bool layered, double alpha, HolderMode mode) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw LabError(ErrorCode::invalid_exponent, "Hoelder exponent must lie in (0, 1]");
  HolderSearch search(grid, std::move(comps), alpha);
  switch (mode.kind) {
    case HolderMode::Kind::exact:
      return search.search(kInfinity, layered);
    case HolderMode::Kind::windowed:
      if (!(mode.window >= 1.0))
        throw LabError(ErrorCode::invalid_argument, "Hoelder window must be at least one node");
      return search.search(mode.window, layered);
    case HolderMode::Kind::sampled:
      if (mode.n_pairs < 1)
        throw LabError(ErrorCode::invalid_argument, "sampled Hoelder mode needs n_pairs >= 1");
      return search.sampled(mode.seed, mode.n_pairs);
  }
  return 0.0;
}

}  // namespace

double holder_seminorm(const ScalarField& f, double alpha, HolderMode mode) {
  return holder_dispatch(f.grid(), {f.values()}, f.is_tangentially_invariant(), alpha, mode);
}

double holder_seminorm(const VectorField3& f, double alpha, HolderMode mode) {
  const bool layered = f[0].is_tangentially_invariant() && f[1].is_tangentially_invariant() &&
                       f[2].is_tangentially_invariant();
  return holder_dispatch(f.grid(), {f[0].values(), f[1].values(), f[2].values()}, layered, alpha,
                         mode);
}

// ---------------------------------------------------------------------------
// Differential operators

ScalarField partial(const ScalarField& f, std::size_t axis) {
  if (axis > 2) throw LabError(ErrorCode::invalid_argument, "axis must be 0, 1 or 2");
  const HalfSpaceGrid& g = f.grid();
  const std::size_t n1 = g.n1(), n2 = g.n2(), n3 = g.n3();
  const double inv = 1.0 / (2.0 * g.h());
  const auto v = f.values();
  std::vector<double> out(g.size());
  parallel_for(0, n3, [&](std::size_t k) {
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t i = 0; i < n1; ++i) {
        double plus = 0.0, minus = 0.0;
        switch (axis) {
          case 0:
            plus = v[g.index(i + 1 == n1 ? 0 : i + 1, j, k)];
            minus = v[g.index(i == 0 ? n1 - 1 : i - 1, j, k)];
            break;
          case 1:
            plus = v[g.index(i, j + 1 == n2 ? 0 : j + 1, k)];
            minus = v[g.index(i, j == 0 ? n2 - 1 : j - 1, k)];
            break;
          default:
            plus = k + 1 < n3 ? v[g.index(i, j, k + 1)] : 0.0;
            minus = k > 0 ? v[g.index(i, j, k - 1)] : 0.0;
        }
        out[g.index(i, j, k)] = (plus - minus) * inv;
      }
  });
  return ScalarField(g, std::move(out));
}

VectorField3 gradient(const ScalarField& f) { return {partial(f, 0), partial(f, 1), partial(f, 2)}; }

TensorField gradient(const VectorField3& v) {
  const VectorField3 g0 = gradient(v[0]);
  const VectorField3 g1 = gradient(v[1]);
  const VectorField3 g2 = gradient(v[2]);
  return TensorField({g0[0], g0[1], g0[2], g1[0], g1[1], g1[2], g2[0], g2[1], g2[2]});
}

ScalarField divergence(const VectorField3& v) {
  return partial(v[0], 0) + partial(v[1], 1) + partial(v[2], 2);
}

VectorField3 curl(const VectorField3& psi) {
  return {partial(psi[2], 1) - partial(psi[1], 2), partial(psi[0], 2) - partial(psi[2], 0),
          partial(psi[1], 0) - partial(psi[0], 1)};
}

VectorField3 convective_term(const VectorField3& v) {
  const TensorField g = gradient(v);
  auto row = [&](std::size_t i) {
    return v[0] * g(i, 0) + v[1] * g(i, 1) + v[2] * g(i, 2);
  };
  return {row(0), row(1), row(2)};
}

double dirichlet_energy(const ScalarField& f) {
  const HalfSpaceGrid& g = f.grid();
  const std::size_t n1 = g.n1(), n2 = g.n2(), n3 = g.n3();
  const double h = g.h();
  const auto v = f.values();
  std::vector<double> layer_sum(n3);
  parallel_for(0, n3, [&](std::size_t k) {
    std::vector<double> tang(g.layer_size());
    std::vector<double> normal(k + 1 < n3 ? g.layer_size() : 0);
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t i = 0; i < n1; ++i) {
        const double c = v[g.index(i, j, k)];
        const double d1 = (v[g.index(i + 1 == n1 ? 0 : i + 1, j, k)] - c) / h;
        const double d2 = (v[g.index(i, j + 1 == n2 ? 0 : j + 1, k)] - c) / h;
        tang[i + n1 * j] = d1 * d1 + d2 * d2;
        if (k + 1 < n3) {
          const double d3 = (v[g.index(i, j, k + 1)] - c) / h;
          normal[i + n1 * j] = d3 * d3;
        }
      }
    double s = g.quadrature_weight(k) * pairwise_sum(tang);
    if (k + 1 < n3) s += h * h * h * pairwise_sum(normal);
    layer_sum[k] = s;
  });
  return pairwise_sum(layer_sum);
}

double dirichlet_energy(const VectorField3& v) {
  return dirichlet_energy(v[0]) + dirichlet_energy(v[1]) + dirichlet_energy(v[2]);
}

// ---------------------------------------------------------------------------
// Maximal function

std::size_t lattice_ball_count(std::size_t radius_nodes) {
  const long r = static_cast<long>(radius_nodes);
  std::size_t count = 0;
  for (long c = -r; c <= r; ++c)
    for (long b = -r; b <= r; ++b)
      for (long a = -r; a <= r; ++a)
        if (a * a + b * b + c * c <= r * r) ++count;
  return count;
}

std::vector<ScalarField> maximal_function_multi(const ScalarField& f,
                                                std::span<const double> r_max) {
  const HalfSpaceGrid& g = f.grid();
  std::vector<std::size_t> cut(r_max.size());
  std::size_t top = 0;
  for (std::size_t n = 0; n < r_max.size(); ++n) {
    if (!(r_max[n] >= g.h() * (1.0 - 1e-12)))
      throw LabError(ErrorCode::invalid_radius, "maximal function needs r_max >= h");
    cut[n] = static_cast<std::size_t>(std::floor(r_max[n] / g.h() + 1e-9));
    top = std::max(top, cut[n]);
  }
  const ScalarField a = abs(f);
  std::vector<double> running(a.values().begin(), a.values().end());
  std::vector<double> best = running;
  std::vector<ScalarField> out(r_max.size(), ScalarField::zeros(g));
  auto record = [&](std::size_t radius) {
    for (std::size_t n = 0; n < cut.size(); ++n)
      if (cut[n] == radius) out[n] = ScalarField(g, best);
  };
  record(0);
  const bool layered = a.is_tangentially_invariant();
  for (std::size_t r = 1; r <= top; ++r) {
    const long lr = static_cast<long>(r);
    std::vector<detail::Offset> shell;
    for (long c = -lr; c <= lr; ++c)
      for (long b = -lr; b <= lr; ++b)
        for (long aa = -lr; aa <= lr; ++aa) {
          const long d2 = aa * aa + b * b + c * c;
          if (d2 <= lr * lr && d2 > (lr - 1) * (lr - 1))
            shell.push_back({static_cast<int>(aa), static_cast<int>(b), static_cast<int>(c)});
        }
    const std::vector<double> ones(shell.size(), 1.0);
    if (!a.is_zero()) detail::apply(g, a.values(), running, shell, ones, 0, layered);
    const double inv = 1.0 / static_cast<double>(lattice_ball_count(r));
    for (std::size_t n = 0; n < best.size(); ++n) best[n] = std::max(best[n], running[n] * inv);
    record(r);
  }
  return out;
}

ScalarField maximal_function(const ScalarField& f, double r_max) {
  const double radii[1] = {r_max};
  return std::move(maximal_function_multi(f, radii).front());
}

}  // namespace mollify_lab
