#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mollify_lab/grid.hpp"
#include "mollify_lab/stencil.hpp"

namespace mollify_lab::detail {

using Offset = LatticeOffset;

/// out(x) += sum_t w[t] * in_bar(x - o[t] - shift e3), where in_bar is periodic
/// tangentially and zero outside 0 <= k < n3. Taps are summed in the given
/// order at every node, so the result does not depend on threading.
void apply_taps(const HalfSpaceGrid& grid, std::span<const double> in, std::span<double> out,
                std::span<const Offset> offsets, std::span<const double> weights, int shift);

/// Same sum for an input that is constant on every x3 layer: taps are collapsed
/// by c into a 1-D filter and only one value per layer is computed.
void apply_taps_layered(const HalfSpaceGrid& grid, std::span<const double> in,
                        std::span<double> out, std::span<const Offset> offsets,
                        std::span<const double> weights, int shift);

/// Picks the layered path when `layered` is set, else the general one.
void apply(const HalfSpaceGrid& grid, std::span<const double> in, std::span<double> out,
           std::span<const Offset> offsets, std::span<const double> weights, int shift,
           bool layered);

}  // namespace mollify_lab::detail
