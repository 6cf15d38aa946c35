#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "json.hpp"
#include "mollify_lab/field.hpp"

namespace mollify_lab {

/// Recipe for a generated field. Same spec on the same grid gives the same
/// bytes.
struct GeneratorSpec {
  std::string kind = "curl";  // shear | curl | power | weierstrass | zero
  std::uint64_t seed = 0;
  double alpha = 0.5;      // power, weierstrass
  double amplitude = 1.0;  // max |v| for curl/weierstrass, scale for shear/power
  // Zero node layers at the top of the box; negative means n3 / 4.
  long top_margin = -1;
  int modes = 3;           // curl: largest tangential / normal wavenumber
  int octaves = -1;        // weierstrass: J, negative picks the finest resolved
  double lambda = 2.0;     // weierstrass frequency ratio
  int m = 1;               // shear: sin(m pi x3 / Lc)
};

GeneratorSpec generator_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GeneratorSpec& spec);

VectorField3 generate(const GeneratorSpec& spec, const HalfSpaceGrid& grid);

/// v = (g(x3), 0, 0).
VectorField3 shear_field(const std::function<double(double)>& g, const HalfSpaceGrid& grid);

/// v = curl psi with a band-limited seeded potential, smooth in x3 and
/// supported in [2h, (n3 - 1 - top_margin) h].
VectorField3 curl_field(std::uint64_t seed, int modes, double amplitude, std::size_t top_margin,
                        const HalfSpaceGrid& grid);

/// v = (phi(x3)^alpha, 0, 0) where phi is a smooth 1-Lipschitz tent on
/// [0, Z], Z = L3 - top_margin h, phi(x) = x on [0, Z/3]. Hence [v]_alpha = 1.
VectorField3 power_field(double alpha, const HalfSpaceGrid& grid, std::size_t top_margin);

/// Curl of a tangential lacunary series sum_j lambda^(-(1+alpha) j) sin(lambda^j k.x + phase),
/// so the velocity has Hoelder regularity alpha in x1, x2.
VectorField3 weierstrass_field(double alpha, std::uint64_t seed, int octaves, double lambda,
                               double amplitude, std::size_t top_margin, const HalfSpaceGrid& grid);

/// Default for top_margin: n3 / 4.
std::size_t default_top_margin(const HalfSpaceGrid& grid);
/// Largest J whose top octave keeps at least 4 nodes per wavelength.
int resolved_octaves(const HalfSpaceGrid& grid, double lambda);

}  // namespace mollify_lab
