#include "mollify_lab/grid.hpp"

#include <cmath>
#include <string>

#include "mollify_lab/error.hpp"

namespace mollify_lab {

HalfSpaceGrid::HalfSpaceGrid(std::size_t n1, std::size_t n2, std::size_t n3, double h)
    : n1_(n1), n2_(n2), n3_(n3), h_(h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw LabError(ErrorCode::invalid_argument, "grid spacing must be positive");
  if (n1 < 1 || n2 < 1)
    throw LabError(ErrorCode::invalid_argument, "tangential node counts must be positive");
  if (n3 < 4)
    throw LabError(ErrorCode::invalid_argument,
                   "need at least 4 nodes in x3, got " + std::to_string(n3));
}

}  // namespace mollify_lab
