#include "stencil_engine.hpp"

#include <algorithm>
#include <map>

#include "mollify_lab/parallel.hpp"

namespace mollify_lab::detail {

namespace {

inline std::size_t wrap(long v, long n) {
  long r = v % n;
  return static_cast<std::size_t>(r < 0 ? r + n : r);
}

// dst[i] += w * src[(i - a) mod n] for i in [0, n).
inline void axpy_shifted(double* dst, const double* src, std::size_t n, std::size_t s, double w) {
  // Source index i - a mod n == i + s mod n with s = (-a) mod n.
  const std::size_t first = n - s;
  const double* tail = src + s;
  for (std::size_t i = 0; i < first; ++i) dst[i] += w * tail[i];
  double* d2 = dst + first;
  for (std::size_t i = 0; i < s; ++i) d2[i] += w * src[i];
}

}  // namespace

void apply_taps(const HalfSpaceGrid& grid, std::span<const double> in, std::span<double> out,
                std::span<const Offset> offsets, std::span<const double> weights, int shift) {
  const long n1 = static_cast<long>(grid.n1());
  const long n2 = static_cast<long>(grid.n2());
  const long n3 = static_cast<long>(grid.n3());
  const std::size_t layer = grid.layer_size();
  parallel_for(0, grid.n3(), [&](std::size_t kk) {
    const long k = static_cast<long>(kk);
    double* out_layer = out.data() + kk * layer;
    for (std::size_t t = 0; t < offsets.size(); ++t) {
      const double w = weights[t];
      if (w == 0.0) continue;
      const long ks = k - offsets[t].c - shift;
      if (ks < 0 || ks >= n3) continue;
      const double* in_layer = in.data() + static_cast<std::size_t>(ks) * layer;
      const std::size_t s = wrap(-offsets[t].a, n1);
      for (long j = 0; j < n2; ++j) {
        const std::size_t js = wrap(j - offsets[t].b, n2);
        axpy_shifted(out_layer + static_cast<std::size_t>(j) * grid.n1(),
                     in_layer + js * grid.n1(), grid.n1(), s, w);
      }
    }
  });
}

void apply_taps_layered(const HalfSpaceGrid& grid, std::span<const double> in,
                        std::span<double> out, std::span<const Offset> offsets,
                        std::span<const double> weights, int shift) {
  // Collapse in tap order per c so the layered result equals the general one
  // up to rounding of the regrouped sum.
  std::map<int, double> by_c;
  for (std::size_t t = 0; t < offsets.size(); ++t) by_c[offsets[t].c] += weights[t];
  const long n3 = static_cast<long>(grid.n3());
  const std::size_t layer = grid.layer_size();
  for (long k = 0; k < n3; ++k) {
    double acc = 0.0;
    for (const auto& [c, w] : by_c) {
      const long ks = k - c - shift;
      if (ks < 0 || ks >= n3) continue;
      acc += w * in[static_cast<std::size_t>(ks) * layer];
    }
    double* o = out.data() + static_cast<std::size_t>(k) * layer;
    for (std::size_t m = 0; m < layer; ++m) o[m] += acc;
  }
}

void apply(const HalfSpaceGrid& grid, std::span<const double> in, std::span<double> out,
           std::span<const Offset> offsets, std::span<const double> weights, int shift,
           bool layered) {
  if (layered)
    apply_taps_layered(grid, in, out, offsets, weights, shift);
  else
    apply_taps(grid, in, out, offsets, weights, shift);
}

}  // namespace mollify_lab::detail
