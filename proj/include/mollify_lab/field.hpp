#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mollify_lab/grid.hpp"

namespace mollify_lab {

/// Node values on a HalfSpaceGrid together with the extension rule: periodic
/// in x1, x2 and zero below x3 = 0 and above x3 = L3.
///
/// Fields are immutable once built. Structural facts used by the kernels
/// (support margin, all-zero, tangential invariance) are computed up front.
class ScalarField {
 public:
  ScalarField(HalfSpaceGrid grid, std::vector<double> values);

  static ScalarField zeros(const HalfSpaceGrid& grid);

  /// Samples f(x1, x2, x3) at every node.
  template <class F>
  static ScalarField from_function(const HalfSpaceGrid& grid, F&& f) {
    std::vector<double> values(grid.size());
    for (std::size_t k = 0; k < grid.n3(); ++k)
      for (std::size_t j = 0; j < grid.n2(); ++j)
        for (std::size_t i = 0; i < grid.n1(); ++i)
          values[grid.index(i, j, k)] = f(grid.x1(i), grid.x2(j), grid.x3(k));
    return ScalarField(grid, std::move(values));
  }

  const HalfSpaceGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return values_[grid_.index(i, j, k)];
  }

  /// Value of the extended field at an arbitrary node index.
  double sample(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept;

  /// Number of all-zero node layers counted down from x3 = L3.
  std::size_t support_margin() const noexcept { return margin_; }
  bool is_zero() const noexcept { return margin_ == grid_.n3(); }
  /// True when every x3-layer is constant.
  bool is_tangentially_invariant() const noexcept { return tangential_; }
  double max_abs() const noexcept;

 private:
  HalfSpaceGrid grid_;
  std::vector<double> values_;
  std::size_t margin_ = 0;
  bool tangential_ = false;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField abs(const ScalarField& a);

/// Three components on one grid; houses velocity snapshots.
class VectorField3 {
 public:
  VectorField3(ScalarField c0, ScalarField c1, ScalarField c2);

  static VectorField3 zeros(const HalfSpaceGrid& grid);

  const HalfSpaceGrid& grid() const noexcept { return components_[0].grid(); }
  const ScalarField& operator[](std::size_t c) const noexcept { return components_[c]; }
  std::size_t support_margin() const noexcept;
  bool is_zero() const noexcept;

  /// Euclidean length at each node.
  ScalarField magnitude() const;

 private:
  std::array<ScalarField, 3> components_;
};

VectorField3 operator+(const VectorField3& a, const VectorField3& b);
VectorField3 operator-(const VectorField3& a, const VectorField3& b);
VectorField3 operator*(double c, const VectorField3& a);

/// 3x3 tensor-valued field stored row-major: entry (i, j) at 3 i + j.
/// Gradients use (i, j) = d_j u_i.
class TensorField {
 public:
  explicit TensorField(std::array<ScalarField, 9> entries);

  static TensorField zeros(const HalfSpaceGrid& grid);
  /// a_i b_j at every node.
  static TensorField outer(const VectorField3& a, const VectorField3& b);

  const HalfSpaceGrid& grid() const noexcept { return entries_[0].grid(); }
  const ScalarField& operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[3 * i + j];
  }
  std::size_t support_margin() const noexcept;

  /// Frobenius norm at each node.
  ScalarField magnitude() const;

 private:
  std::array<ScalarField, 9> entries_;
};

TensorField operator+(const TensorField& a, const TensorField& b);
TensorField operator-(const TensorField& a, const TensorField& b);

void require_same_grid(const HalfSpaceGrid& a, const HalfSpaceGrid& b);

}  // namespace mollify_lab
