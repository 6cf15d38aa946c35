#include "mollify_lab/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "mollify_lab/error.hpp"
#include "mollify_lab/field_ops.hpp"

namespace mollify_lab {

namespace {

using std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform [0, 1) from (seed, counters); independent of evaluation order.
double unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c,
            std::uint64_t d) noexcept {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t v : {a, b, c, d}) h = splitmix64(h ^ v);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Smooth bump on (lo, hi), zero outside.
double cutoff(double x, double lo, double hi) {
  if (x <= lo || x >= hi) return 0.0;
  const double t = (2.0 * x - lo - hi) / (hi - lo);
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

std::size_t resolve_margin(long requested, const HalfSpaceGrid& grid) {
  return requested < 0 ? default_top_margin(grid) : static_cast<std::size_t>(requested);
}

// Support of the potential in x3, leaving v zero on the wall and on the top
// `top_margin` layers.
std::pair<double, double> potential_band(const HalfSpaceGrid& grid, std::size_t top_margin) {
  const double lo = 2.0 * grid.h();
  if (top_margin + 6 > grid.n3())
    throw LabError(ErrorCode::invalid_argument, "top margin leaves no room for the field");
  const double hi = static_cast<double>(grid.n3() - 1 - top_margin) * grid.h();
  return {lo, hi};
}

// psi_c(x) = B(x3) sum_m T_m(x1, x2) Z_m(x3), evaluated separably.
struct SeparableSum {
  std::vector<std::vector<double>> tangential;  // [mode][i + n1 j]
  std::vector<std::vector<double>> normal;      // [mode][k]

  ScalarField evaluate(const HalfSpaceGrid& g, double scale) const {
    std::vector<double> out(g.size(), 0.0);
    const std::size_t layer = g.layer_size();
    for (std::size_t k = 0; k < g.n3(); ++k)
      for (std::size_t m = 0; m < tangential.size(); ++m) {
        const double z = normal[m][k] * scale;
        if (z == 0.0) continue;
        double* o = out.data() + k * layer;
        const double* t = tangential[m].data();
        for (std::size_t n = 0; n < layer; ++n) o[n] += z * t[n];
      }
    return ScalarField(g, std::move(out));
  }
};

VectorField3 normalized_curl(const std::array<SeparableSum, 3>& psi, double amplitude,
                             const HalfSpaceGrid& g) {
  auto build = [&](double scale) {
    return curl(VectorField3(psi[0].evaluate(g, scale), psi[1].evaluate(g, scale),
                             psi[2].evaluate(g, scale)));
  };
  const double peak = build(1.0).magnitude().max_abs();
  if (amplitude == 0.0 || peak == 0.0) return VectorField3::zeros(g);
  return build(amplitude / peak);
}

}  // namespace

std::size_t default_top_margin(const HalfSpaceGrid& grid) { return grid.n3() / 4; }

int resolved_octaves(const HalfSpaceGrid& grid, double lambda) {
  const double n = static_cast<double>(std::min(grid.n1(), grid.n2()));
  int J = 0;
  while (std::pow(lambda, J + 1) * 4.0 <= n) ++J;
  return J;
}

VectorField3 shear_field(const std::function<double(double)>& g, const HalfSpaceGrid& grid) {
  return {ScalarField::from_function(grid, [&](double, double, double x3) { return g(x3); }),
          ScalarField::zeros(grid), ScalarField::zeros(grid)};
}

VectorField3 curl_field(std::uint64_t seed, int modes, double amplitude, std::size_t top_margin,
                        const HalfSpaceGrid& g) {
  if (modes < 1) throw LabError(ErrorCode::invalid_argument, "curl field needs modes >= 1");
  const auto [lo, hi] = potential_band(g, top_margin);
  std::array<SeparableSum, 3> psi;
  for (std::size_t c = 0; c < 3; ++c) {
    for (int k1 = -modes; k1 <= modes; ++k1)
      for (int k2 = -modes; k2 <= modes; ++k2)
        for (int k3 = 1; k3 <= modes; ++k3) {
          const auto key = [&](int which) {
            return unit(seed, c, static_cast<std::uint64_t>((k1 + 64) * 256 + (k2 + 64)),
                        static_cast<std::uint64_t>(k3), static_cast<std::uint64_t>(which));
          };
          const double amp = (2.0 * key(0) - 1.0) /
                             std::sqrt(1.0 + k1 * k1 + k2 * k2 + k3 * k3);
          const double phase = 2.0 * pi * key(1);
          std::vector<double> t(g.layer_size());
          for (std::size_t j = 0; j < g.n2(); ++j)
            for (std::size_t i = 0; i < g.n1(); ++i)
              t[i + g.n1() * j] = amp * std::cos(2.0 * pi *
                                                     (k1 * g.x1(i) / g.period1() +
                                                      k2 * g.x2(j) / g.period2()) +
                                                 phase);
          std::vector<double> z(g.n3());
          for (std::size_t k = 0; k < g.n3(); ++k) {
            const double x3 = g.x3(k);
            z[k] = cutoff(x3, lo, hi) * std::sin(k3 * pi * (x3 - lo) / (hi - lo));
          }
          psi[c].tangential.push_back(std::move(t));
          psi[c].normal.push_back(std::move(z));
        }
  }
  return normalized_curl(psi, amplitude, g);
}

VectorField3 power_field(double alpha, const HalfSpaceGrid& g, std::size_t top_margin) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw LabError(ErrorCode::invalid_exponent, "power field needs alpha in (0, 1]");
  if (top_margin + 4 > g.n3())
    throw LabError(ErrorCode::invalid_argument, "top margin leaves no room for the field");
  const double Z = static_cast<double>(g.n3() - 1 - top_margin) * g.h();
  const double third = Z / 3.0;
  auto phi = [=](double x) {
    if (x <= 0.0 || x >= Z) return 0.0;
    if (x <= third) return x;
    if (x >= 2.0 * third) return Z - x;
    // phi' = 1 - 2 S(t) with the smoothstep S; integrated in closed form.
    const double t = (x - third) / third;
    return third + third * (t - 2.0 * (t * t * t - 0.5 * t * t * t * t));
  };
  return shear_field([=](double x3) { return std::pow(phi(x3), alpha); }, g);
}

VectorField3 weierstrass_field(double alpha, std::uint64_t seed, int octaves, double lambda,
                               double amplitude, std::size_t top_margin, const HalfSpaceGrid& g) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw LabError(ErrorCode::invalid_exponent, "Weierstrass field needs alpha in (0, 1)");
  if (!(lambda >= 2.0) || lambda != std::floor(lambda))
    throw LabError(ErrorCode::invalid_argument, "lambda must be an integer >= 2");
  const int J = octaves < 0 ? resolved_octaves(g, lambda) : octaves;
  const auto [lo, hi] = potential_band(g, top_margin);
  static constexpr std::array<std::array<int, 2>, 4> kDirections = {{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
  std::vector<double> z(g.n3());
  for (std::size_t k = 0; k < g.n3(); ++k) z[k] = cutoff(g.x3(k), lo, hi);
  std::array<SeparableSum, 3> psi;
  for (std::size_t c = 0; c < 3; ++c)
    for (int j = 0; j <= J; ++j) {
      const double freq = std::pow(lambda, j);
      for (std::size_t d = 0; d < kDirections.size(); ++d) {
        const double k1 = freq * kDirections[d][0];
        const double k2 = freq * kDirections[d][1];
        const double amp = std::pow(lambda, -(1.0 + alpha) * j) / std::hypot(kDirections[d][0], kDirections[d][1]);
        const double phase = 2.0 * pi * unit(seed, c, static_cast<std::uint64_t>(j), d, 7);
        std::vector<double> t(g.layer_size());
        for (std::size_t jj = 0; jj < g.n2(); ++jj)
          for (std::size_t i = 0; i < g.n1(); ++i)
            t[i + g.n1() * jj] =
                amp * std::sin(2.0 * pi * (k1 * g.x1(i) / g.period1() + k2 * g.x2(jj) / g.period2()) +
                               phase);
        psi[c].tangential.push_back(std::move(t));
        psi[c].normal.push_back(z);
      }
    }
  return normalized_curl(psi, amplitude, g);
}

VectorField3 generate(const GeneratorSpec& spec, const HalfSpaceGrid& grid) {
  const std::size_t margin = resolve_margin(spec.top_margin, grid);
  if (spec.kind == "zero") return VectorField3::zeros(grid);
  if (spec.kind == "shear") {
    if (spec.m < 1) throw LabError(ErrorCode::invalid_argument, "shear needs m >= 1");
    if (margin + 2 > grid.n3())
      throw LabError(ErrorCode::invalid_argument, "top margin leaves no room for the field");
    const double Lc = static_cast<double>(grid.n3() - 1 - margin) * grid.h();
    const double A = spec.amplitude;
    const int m = spec.m;
    return shear_field(
        [=](double x3) { return x3 >= Lc ? 0.0 : A * std::sin(m * pi * x3 / Lc); }, grid);
  }
  if (spec.kind == "curl") return curl_field(spec.seed, spec.modes, spec.amplitude, margin, grid);
  if (spec.kind == "power") {
    const VectorField3 v = power_field(spec.alpha, grid, margin);
    return spec.amplitude == 1.0 ? v : spec.amplitude * v;
  }
  if (spec.kind == "weierstrass")
    return weierstrass_field(spec.alpha, spec.seed, spec.octaves, spec.lambda, spec.amplitude,
                             margin, grid);
  throw LabError(ErrorCode::invalid_argument, "unknown generator kind '" + spec.kind + "'");
}

GeneratorSpec generator_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw LabError(ErrorCode::format_error, "generator spec must be an object");
  GeneratorSpec s;
  try {
    s.kind = j.value("kind", s.kind);
    s.seed = j.value("seed", s.seed);
    s.alpha = j.value("alpha", s.alpha);
    s.amplitude = j.value("amplitude", s.amplitude);
    s.top_margin = j.value("top_margin", s.top_margin);
    s.modes = j.value("modes", s.modes);
    s.octaves = j.value("octaves", s.octaves);
    s.lambda = j.value("lambda", s.lambda);
    s.m = j.value("m", s.m);
  } catch (const nlohmann::json::exception& e) {
    throw LabError(ErrorCode::format_error, std::string("generator spec: ") + e.what());
  }
  return s;
}

nlohmann::json to_json(const GeneratorSpec& s) {
  return {{"kind", s.kind},   {"seed", s.seed},       {"alpha", s.alpha},
          {"amplitude", s.amplitude}, {"top_margin", s.top_margin}, {"modes", s.modes},
          {"octaves", s.octaves}, {"lambda", s.lambda}, {"m", s.m}};
}

}  // namespace mollify_lab
