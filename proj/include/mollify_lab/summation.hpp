#pragma once

#include <span>

namespace mollify_lab {

/// Pairwise (cascade) summation with a fixed split order. The result depends
/// only on the input sequence, never on thread count.
double pairwise_sum(std::span<const double> values) noexcept;

}  // namespace mollify_lab
