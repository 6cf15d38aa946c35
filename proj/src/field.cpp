#include "mollify_lab/field.hpp"

#include <algorithm>
#include <cmath>

#include "mollify_lab/error.hpp"

namespace mollify_lab {

void require_same_grid(const HalfSpaceGrid& a, const HalfSpaceGrid& b) {
  if (!(a == b)) throw LabError(ErrorCode::grid_mismatch, "fields live on different grids");
}

ScalarField::ScalarField(HalfSpaceGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw LabError(ErrorCode::invalid_argument, "value count does not match grid size");
  const std::size_t layer = grid_.layer_size();
  margin_ = 0;
  for (std::size_t k = grid_.n3(); k-- > 0;) {
    const auto first = values_.begin() + static_cast<std::ptrdiff_t>(k * layer);
    if (!std::all_of(first, first + static_cast<std::ptrdiff_t>(layer),
                     [](double v) { return v == 0.0; }))
      break;
    ++margin_;
  }
  tangential_ = true;
  for (std::size_t k = 0; k < grid_.n3() && tangential_; ++k) {
    const double* row = values_.data() + k * layer;
    for (std::size_t m = 1; m < layer; ++m)
      if (row[m] != row[0]) {
        tangential_ = false;
        break;
      }
  }
}

ScalarField ScalarField::zeros(const HalfSpaceGrid& grid) {
  return ScalarField(grid, std::vector<double>(grid.size(), 0.0));
}

double ScalarField::sample(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept {
  const auto n3 = static_cast<std::int64_t>(grid_.n3());
  if (k < 0 || k >= n3) return 0.0;
  const auto n1 = static_cast<std::int64_t>(grid_.n1());
  const auto n2 = static_cast<std::int64_t>(grid_.n2());
  i %= n1;
  if (i < 0) i += n1;
  j %= n2;
  if (j < 0) j += n2;
  return values_[grid_.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                             static_cast<std::size_t>(k))];
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

template <class Op>
ScalarField combine(const ScalarField& a, const ScalarField& b, Op op) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> out(a.values().size());
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = op(av[n], bv[n]);
  return ScalarField(a.grid(), std::move(out));
}

template <class Op>
ScalarField map(const ScalarField& a, Op op) {
  std::vector<double> out(a.values().begin(), a.values().end());
  for (double& v : out) v = op(v);
  return ScalarField(a.grid(), std::move(out));
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return x + y; });
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return x - y; });
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return x * y; });
}
ScalarField operator*(double c, const ScalarField& a) {
  return map(a, [c](double x) { return c * x; });
}
ScalarField abs(const ScalarField& a) {
  return map(a, [](double x) { return std::abs(x); });
}

VectorField3::VectorField3(ScalarField c0, ScalarField c1, ScalarField c2)
    : components_{std::move(c0), std::move(c1), std::move(c2)} {
  require_same_grid(components_[0].grid(), components_[1].grid());
  require_same_grid(components_[0].grid(), components_[2].grid());
}

VectorField3 VectorField3::zeros(const HalfSpaceGrid& grid) {
  return {ScalarField::zeros(grid), ScalarField::zeros(grid), ScalarField::zeros(grid)};
}

std::size_t VectorField3::support_margin() const noexcept {
  return std::min({components_[0].support_margin(), components_[1].support_margin(),
                   components_[2].support_margin()});
}

bool VectorField3::is_zero() const noexcept {
  return components_[0].is_zero() && components_[1].is_zero() && components_[2].is_zero();
}

ScalarField VectorField3::magnitude() const {
  std::vector<double> out(grid().size());
  const auto a = components_[0].values();
  const auto b = components_[1].values();
  const auto c = components_[2].values();
  for (std::size_t n = 0; n < out.size(); ++n)
    out[n] = std::sqrt(a[n] * a[n] + b[n] * b[n] + c[n] * c[n]);
  return ScalarField(grid(), std::move(out));
}

VectorField3 operator+(const VectorField3& a, const VectorField3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
VectorField3 operator-(const VectorField3& a, const VectorField3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
VectorField3 operator*(double c, const VectorField3& a) {
  return {c * a[0], c * a[1], c * a[2]};
}

TensorField::TensorField(std::array<ScalarField, 9> entries) : entries_(std::move(entries)) {
  for (std::size_t n = 1; n < 9; ++n) require_same_grid(entries_[0].grid(), entries_[n].grid());
}

TensorField TensorField::zeros(const HalfSpaceGrid& grid) {
  const ScalarField z = ScalarField::zeros(grid);
  return TensorField({z, z, z, z, z, z, z, z, z});
}

namespace {
template <class F>
std::array<ScalarField, 9> build9(F&& f) {
  return {f(0, 0), f(0, 1), f(0, 2), f(1, 0), f(1, 1), f(1, 2), f(2, 0), f(2, 1), f(2, 2)};
}
}  // namespace

TensorField TensorField::outer(const VectorField3& a, const VectorField3& b) {
  return TensorField(build9([&](std::size_t i, std::size_t j) { return a[i] * b[j]; }));
}

std::size_t TensorField::support_margin() const noexcept {
  std::size_t m = entries_[0].support_margin();
  for (const auto& e : entries_) m = std::min(m, e.support_margin());
  return m;
}

ScalarField TensorField::magnitude() const {
  std::vector<double> out(grid().size(), 0.0);
  for (const auto& e : entries_) {
    const auto v = e.values();
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += v[n] * v[n];
  }
  for (double& v : out) v = std::sqrt(v);
  return ScalarField(grid(), std::move(out));
}

TensorField operator+(const TensorField& a, const TensorField& b) {
  return TensorField(build9([&](std::size_t i, std::size_t j) { return a(i, j) + b(i, j); }));
}
TensorField operator-(const TensorField& a, const TensorField& b) {
  return TensorField(build9([&](std::size_t i, std::size_t j) { return a(i, j) - b(i, j); }));
}

}  // namespace mollify_lab
