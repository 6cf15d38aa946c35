#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mollify_lab/field.hpp"

namespace mollify_lab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// L^r norm by composite quadrature: rectangle rule tangentially, trapezoid in
/// x3 on [0, L3]. r = kInfinity gives the max over nodes. Vector and tensor
/// fields use the pointwise Euclidean (Frobenius) length.
double lp_norm(const ScalarField& f, double r);
double lp_norm(const VectorField3& f, double r);
double lp_norm(const TensorField& f, double r);

/// Quadrature of f over the box.
double integrate(const ScalarField& f);
double l2_inner(const ScalarField& f, const ScalarField& g);
double l2_inner(const VectorField3& f, const VectorField3& g);
/// Integral of A:B = sum_ij A_ij B_ij.
double contract_integral(const TensorField& a, const TensorField& b);

/// How holder_seminorm searches for the supremum.
///
/// exact: every node pair (periodic minimum image tangentially) plus the pairs
/// that reach into the zero extension. windowed: the same but only separations
/// up to `window` node lengths. sampled: `n_pairs` random node pairs drawn from
/// `seed`. windowed and sampled never exceed exact.
struct HolderMode {
  enum class Kind { exact, sampled, windowed };
  Kind kind = Kind::exact;
  std::uint64_t seed = 0;
  std::size_t n_pairs = 0;
  double window = 0.0;

  static HolderMode exact() { return {}; }
  static HolderMode sampled(std::uint64_t seed, std::size_t n_pairs) {
    return {Kind::sampled, seed, n_pairs, 0.0};
  }
  static HolderMode windowed(double nodes) { return {Kind::windowed, 0, 0, nodes}; }
};

double holder_seminorm(const ScalarField& f, double alpha, HolderMode mode = HolderMode::exact());
double holder_seminorm(const VectorField3& f, double alpha,
                       HolderMode mode = HolderMode::exact());

/// Central difference along axis 0, 1 or 2. Tangential axes wrap; in x3 the
/// end nodes see the zero extension.
ScalarField partial(const ScalarField& f, std::size_t axis);
VectorField3 gradient(const ScalarField& f);
/// Entry (i, j) holds d_j v_i.
TensorField gradient(const VectorField3& v);
ScalarField divergence(const VectorField3& v);
VectorField3 curl(const VectorField3& psi);

/// [grad v] v, i.e. component i is sum_j v_j d_j v_i.
VectorField3 convective_term(const VectorField3& v);

/// Integral of |grad v|^2 from forward differences on the grid edges inside
/// [0, L3]: tangential edges carry the trapezoid layer weight, x3 edges the
/// full h^3. Unlike the central difference this stays second order next to
/// the wall.
double dirichlet_energy(const ScalarField& f);
double dirichlet_energy(const VectorField3& v);

/// Discrete Hardy-Littlewood maximal function: sup over radii i h <= r_max
/// (i = 0, 1, ...) of the mean of |f| over the lattice ball, zero extension
/// included in both the sum and the node count.
ScalarField maximal_function(const ScalarField& f, double r_max);

/// Same sweep recorded at several cut-off radii in one pass. Result n matches
/// maximal_function(f, r_max[n]).
std::vector<ScalarField> maximal_function_multi(const ScalarField& f,
                                                std::span<const double> r_max);

/// Number of lattice offsets o with |o| <= radius (in node units).
std::size_t lattice_ball_count(std::size_t radius_nodes);

}  // namespace mollify_lab
