#include "mollify_lab/summation.hpp"

namespace mollify_lab {

namespace {
constexpr std::size_t kLeaf = 32;
}

double pairwise_sum(std::span<const double> values) noexcept {
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace mollify_lab
