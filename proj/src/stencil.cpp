#include "mollify_lab/stencil.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <utility>

#include "mollify_lab/error.hpp"
#include "mollify_lab/summation.hpp"

namespace mollify_lab {

namespace {

std::shared_ptr<const DiscreteStencil> build(const MollifierKernel& kernel, double eps, double h) {
  auto s = std::make_shared<DiscreteStencil>();
  s->epsilon = eps;
  s->h = h;
  const double ratio = eps / h;
  s->radius_nodes = static_cast<int>(std::ceil(ratio - 1e-9));
  const int R = s->radius_nodes;
  const double inv_eps = 1.0 / eps;
  const double scale = h * h * h / (eps * eps * eps);  // rho_eps(y) h^3 = rho(y/eps) (h/eps)^3
  std::vector<double> raw;
  std::array<std::vector<double>, 3> graw;
  for (int c = -R; c <= R; ++c)
    for (int b = -R; b <= R; ++b)
      for (int a = -R; a <= R; ++a) {
        const double x = a * h * inv_eps, y = b * h * inv_eps, z = c * h * inv_eps;
        const double r2 = x * x + y * y + z * z;
        const double w = kernel(r2);
        if (!(w > 0.0)) continue;
        s->offsets.push_back({a, b, c});
        raw.push_back(w * scale);
        // grad rho_eps(y) = eps^-4 grad rho(y / eps).
        const double g = kernel.radial_slope(r2) * scale * inv_eps;
        graw[0].push_back(g * x);
        graw[1].push_back(g * y);
        graw[2].push_back(g * z);
      }
  s->raw_mass = pairwise_sum(raw);
  s->weights.resize(raw.size());
  for (std::size_t t = 0; t < raw.size(); ++t) s->weights[t] = raw[t] / s->raw_mass;
  for (std::size_t d = 0; d < 3; ++d) {
    auto& gw = s->grad_weights[d];
    gw.resize(raw.size());
    for (std::size_t t = 0; t < raw.size(); ++t) gw[t] = graw[d][t] / s->raw_mass;
    const double mean = pairwise_sum(gw) / static_cast<double>(gw.size());
    for (double& v : gw) v -= mean;
  }
  return s;
}

}  // namespace

std::shared_ptr<const DiscreteStencil> make_stencil(const MollifierKernel& kernel, double epsilon,
                                                    double h) {
  if (!(h > 0.0)) throw LabError(ErrorCode::invalid_argument, "grid spacing must be positive");
  if (!(epsilon >= h * (1.0 - 1e-12)))
    throw LabError(ErrorCode::under_resolved_kernel, "epsilon must be at least h");
  static std::mutex mutex;
  static std::map<std::tuple<double, double, double, double>,
                  std::shared_ptr<const DiscreteStencil>> cache;
  const auto key = std::make_tuple(epsilon, h, kernel.C, kernel.c_rho);
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto s = build(kernel, epsilon, h);
  cache.emplace(key, s);
  return s;
}

nlohmann::json stencil_to_json(const DiscreteStencil& stencil) {
  nlohmann::json offsets = nlohmann::json::array();
  for (const auto& o : stencil.offsets) offsets.push_back({o.a, o.b, o.c});
  return {{"epsilon", stencil.epsilon},
          {"h", stencil.h},
          {"radius_nodes", stencil.radius_nodes},
          {"raw_mass", stencil.raw_mass},
          {"offsets", std::move(offsets)},
          {"weights", stencil.weights},
          {"grad_weights", stencil.grad_weights}};
}

}  // namespace mollify_lab
