#pragma once

#include <cstddef>
#include <cstdint>

namespace mollify_lab {

/// Uniform node grid on the truncated half-space [0, n1 h) x [0, n2 h) x [0, L3].
///
/// Tangential directions are periodic with period n h. The wall x3 = 0 carries
/// the node layer k = 0 and the top layer k = n3 - 1 sits at L3 = (n3 - 1) h.
class HalfSpaceGrid {
 public:
  HalfSpaceGrid(std::size_t n1, std::size_t n2, std::size_t n3, double h);

  std::size_t n1() const noexcept { return n1_; }
  std::size_t n2() const noexcept { return n2_; }
  std::size_t n3() const noexcept { return n3_; }
  double h() const noexcept { return h_; }
  std::size_t size() const noexcept { return n1_ * n2_ * n3_; }
  std::size_t layer_size() const noexcept { return n1_ * n2_; }

  /// x1-fastest linear index.
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return i + n1_ * (j + n2_ * k);
  }

  double period1() const noexcept { return static_cast<double>(n1_) * h_; }
  double period2() const noexcept { return static_cast<double>(n2_) * h_; }
  double length3() const noexcept { return static_cast<double>(n3_ - 1) * h_; }

  double x1(std::size_t i) const noexcept { return static_cast<double>(i) * h_; }
  double x2(std::size_t j) const noexcept { return static_cast<double>(j) * h_; }
  double x3(std::size_t k) const noexcept { return static_cast<double>(k) * h_; }

  /// Quadrature weight of a node on layer k: h^3, halved on the two end layers
  /// (rectangle rule tangentially, trapezoid in x3).
  double quadrature_weight(std::size_t k) const noexcept {
    const double w = h_ * h_ * h_;
    return (k == 0 || k + 1 == n3_) ? 0.5 * w : w;
  }

  friend bool operator==(const HalfSpaceGrid&, const HalfSpaceGrid&) = default;

 private:
  std::size_t n1_;
  std::size_t n2_;
  std::size_t n3_;
  double h_;
};

}  // namespace mollify_lab
