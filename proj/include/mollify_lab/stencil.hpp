#pragma once

#include <array>
#include <memory>
#include <vector>

#include "json.hpp"

#include "mollify_lab/kernel.hpp"

namespace mollify_lab {

struct LatticeOffset {
  int a = 0;
  int b = 0;
  int c = 0;
};

/// rho_eps sampled at lattice offsets y with |y| < eps, sorted by (c, b, a).
///
/// `weights` sum to 1 after renormalization by the raw sample mass; each
/// component of `grad_weights` is grad rho_eps(y) h^3 over the same mass,
/// then mean-subtracted so it sums to 0.
struct DiscreteStencil {
  double epsilon = 0.0;
  double h = 0.0;
  int radius_nodes = 0;  // ceil(eps / h)
  std::vector<LatticeOffset> offsets;
  std::vector<double> weights;
  std::array<std::vector<double>, 3> grad_weights;
  double raw_mass = 0.0;  // sum of rho_eps(y) h^3 before renormalization
};

/// Cached per (eps, h); eps < h raises under_resolved_kernel.
std::shared_ptr<const DiscreteStencil> make_stencil(const MollifierKernel& kernel, double epsilon,
                                                    double h);

/// {"epsilon", "h", "offsets": [[a,b,c],...], "weights", "grad_weights"}.
nlohmann::json stencil_to_json(const DiscreteStencil& stencil);

}  // namespace mollify_lab
