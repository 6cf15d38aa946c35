// Batch front end: lemmas, commutator, energy and exponents suites.
//
// Exit codes: 0 every check passed, 1 some check failed, 2 usage or
// configuration error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mollify_lab/commutator.hpp"
#include "mollify_lab/energy_audit.hpp"
#include "mollify_lab/error.hpp"
#include "mollify_lab/exponents.hpp"
#include "mollify_lab/field_io.hpp"
#include "mollify_lab/field_ops.hpp"
#include "mollify_lab/lemma_lab.hpp"
#include "mollify_lab/mollifier.hpp"
#include "mollify_lab/report.hpp"
#include "mollify_lab/stencil.hpp"
#include "mollify_lab/synth.hpp"

namespace ml = mollify_lab;
using nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raw flag values; everything numeric stays a string until parsed so that
// fractions such as 1/3 are accepted.
struct RunConfig {
  std::string grid;  // empty: the subcommand's default size
  std::string h;
  std::optional<std::string> eps;  // unset: the subcommand's default list
  std::string alpha = "0.5";
  std::string beta;
  std::string q;
  std::string nu;
  std::string field;
  std::uint64_t seed = 42;
  double tol = 0.1;
  std::string out;
  std::string csv;
  std::string series = "stokes";
  int snapshots = 9;
  std::string t_final = "1";
};

double parse_number(const std::string& text, const char* what) {
  auto one = [&](std::string_view s) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x))
      throw UsageError(std::string("cannot parse ") + what + " '" + text + "'");
    return x;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return one(text);
  const double den = one(std::string_view(text).substr(slash + 1));
  if (den == 0.0) throw UsageError(std::string(what) + " has a zero denominator");
  return one(std::string_view(text).substr(0, slash)) / den;
}

std::optional<double> parse_optional(const std::string& text, const char* what) {
  if (text.empty()) return std::nullopt;
  return parse_number(text, what);
}

ml::HalfSpaceGrid parse_grid(const RunConfig& cfg, const char* fallback = "32") {
  std::vector<std::size_t> n;
  std::stringstream in(cfg.grid.empty() ? std::string(fallback) : cfg.grid);
  std::string part;
  while (std::getline(in, part, 'x')) {
    const double x = parse_number(part, "grid size");
    if (!(x >= 4.0) || x != std::floor(x)) throw UsageError("grid sizes must be integers >= 4");
    n.push_back(static_cast<std::size_t>(x));
  }
  if (n.size() == 1) n = {n[0], n[0], n[0]};
  if (n.size() != 3) throw UsageError("--grid takes N or N1xN2xN3");
  const double h = cfg.h.empty() ? 1.0 / static_cast<double>(n[0]) : parse_number(cfg.h, "h");
  if (!(h > 0.0)) throw UsageError("--h must be positive");
  return ml::HalfSpaceGrid(n[0], n[1], n[2], h);
}

// Comma separated; "2h" means 2 times the grid step.
std::vector<double> parse_eps(const std::optional<std::string>& text, double h,
                              std::vector<double> fallback) {
  if (!text) {
    for (double& e : fallback) e *= h;
    return fallback;
  }
  std::vector<double> eps;
  std::stringstream in(*text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const bool in_h = item.back() == 'h';
    if (in_h) item.pop_back();
    const double x = item.empty() && in_h ? 1.0 : parse_number(item, "eps");
    if (!(x > 0.0)) throw UsageError("eps values must be positive");
    eps.push_back(in_h ? x * h : x);
  }
  if (eps.empty()) throw UsageError("--eps list is empty");
  std::sort(eps.begin(), eps.end(), std::greater<>());
  return eps;
}

bool starts_with_mlf1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open field file '" + path + "'");
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::string_view(magic, 4) == "MLF1";
}

// --field is either an MLF1 file (which brings its own grid) or a JSON
// generator spec evaluated on --grid.
std::optional<ml::VectorField3> load_field(const RunConfig& cfg, const ml::HalfSpaceGrid& grid,
                                           json& described) {
  if (cfg.field.empty()) return std::nullopt;
  if (starts_with_mlf1(cfg.field)) {
    ml::VectorField3 v = ml::load_vector_field(cfg.field);
    const auto& g = v.grid();
    described = {{"file", cfg.field},
                 {"grid", {g.n1(), g.n2(), g.n3()}},
                 {"h", g.h()},
                 {"fnv1a64", ml::fnv1a64(ml::to_mlf1_bytes(v))}};
    return v;
  }
  std::ifstream in(cfg.field);
  json spec_json;
  try {
    spec_json = json::parse(in);
  } catch (const json::exception& e) {
    throw ml::LabError(ml::ErrorCode::format_error, "field file is neither MLF1 nor JSON");
  }
  const ml::GeneratorSpec spec = ml::generator_spec_from_json(spec_json);
  described = ml::to_json(spec);
  return ml::generate(spec, grid);
}

json grid_json(const ml::HalfSpaceGrid& g) {
  return {{"n", {g.n1(), g.n2(), g.n3()}}, {"h", g.h()}};
}

json config_json(const RunConfig& cfg, const ml::HalfSpaceGrid& grid,
                 const std::vector<double>& eps) {
  return {{"grid", grid_json(grid)}, {"eps", eps},   {"alpha", cfg.alpha},
          {"beta", cfg.beta},        {"q", cfg.q},   {"nu", cfg.nu},
          {"field", cfg.field},      {"seed", cfg.seed}, {"tol", cfg.tol},
          {"series", cfg.series},    {"snapshots", cfg.snapshots},
          {"t_final", cfg.t_final}};
}

void emit(const RunConfig& cfg, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out);
  if (!out) throw ml::LabError(ml::ErrorCode::io_error, "cannot write '" + cfg.out + "'");
  out << text;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ml::LabError(ml::ErrorCode::io_error, "cannot write '" + path + "'");
  out << text;
}

int finish(const RunConfig& cfg, json report, bool passed) {
  report["passed"] = passed;
  emit(cfg, report);
  std::cerr << report["header"]["command"].get<std::string>() << ": "
            << (passed ? "PASS" : "FAIL") << "\n";
  return passed ? kPass : kFail;
}

double alpha_of(const RunConfig& cfg) {
  const double alpha = parse_number(cfg.alpha, "alpha");
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  return alpha;
}

void require_tol(const RunConfig& cfg) {
  if (!(cfg.tol >= 0.0)) throw UsageError("--tol must be nonnegative");
}

// ---------------------------------------------------------------- lemmas

int cmd_lemmas(const RunConfig& cfg) {
  require_tol(cfg);
  const double alpha = alpha_of(cfg);
  json described;
  const ml::HalfSpaceGrid requested = parse_grid(cfg, "64");
  const auto given = load_field(cfg, requested, described);
  const ml::HalfSpaceGrid grid = given ? given->grid() : requested;
  // Defaults: the Hoelder estimates need eps well above h, the maximal
  // function radius 3 eps stays under its cap for eps <= 4h.
  const std::vector<double> eps = parse_eps(cfg.eps, grid.h(), {8.0, 4.0, 2.0});
  const std::vector<double> eps_struct =
      cfg.eps ? eps : parse_eps(std::nullopt, grid.h(), {4.0, 2.0, 1.0});
  const std::size_t margin = ml::default_top_margin(grid);

  // Hoelder estimates run on a field of known seminorm unless one is given;
  // the structural properties on a divergence-free curl field.
  const ml::VectorField3 rough = given ? *given : ml::power_field(alpha, grid, margin);
  const ml::VectorField3 smooth = given ? *given : ml::curl_field(cfg.seed, 1, 1.0, margin, grid);

  ml::LemmaConfig lc;
  lc.tol = cfg.tol;
  lc.seminorm = ml::holder_seminorm(rough, alpha);
  ml::LemmaConfig rate_lc = lc;
  rate_lc.slope_floor = alpha - cfg.tol;

  std::vector<ml::LemmaVerdict> verdicts;
  verdicts.push_back(ml::check_conv20(rough, alpha, eps, rate_lc));
  verdicts.push_back(ml::check_conv30(rough, alpha, eps, lc));
  verdicts.push_back(ml::check_conv1p(rough, alpha, eps.back(),
                                      {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {2, 0, 1}}, lc));
  verdicts.push_back(ml::check_conv2p(rough, alpha, eps, rate_lc));
  verdicts.push_back(ml::check_conv3p(rough, alpha, eps, lc));
  for (auto& v : ml::check_basic_properties(smooth, eps_struct, {1.5, 2.0}, lc))
    verdicts.push_back(std::move(v));
  json skipped = json::array();
  for (double e : eps_struct) {
    if (smooth.support_margin() < 2 * ml::kernel_radius_nodes(e, grid.h())) {
      skipped.push_back(e);
      continue;
    }
    verdicts.push_back(ml::check_admissibility(smooth, e, lc));
  }

  bool passed = true;
  json list = json::array();
  for (const auto& v : verdicts) {
    passed = passed && v.passed;
    list.push_back(ml::to_json(v));
  }
  json config = config_json(cfg, grid, eps);
  config["eps_structural"] = eps_struct;
  config["field_spec"] = described;
  json report = {{"header", ml::report_header("lemmas", config)},
                 {"seminorm", *lc.seminorm},
                 {"verdicts", list},
                 {"admissibility_skipped_eps", skipped}};
  return finish(cfg, std::move(report), passed);
}

// ------------------------------------------------------------ commutator

int cmd_commutator(const RunConfig& cfg) {
  require_tol(cfg);
  const double alpha = alpha_of(cfg);
  json described;
  const ml::HalfSpaceGrid requested = parse_grid(cfg);
  const auto given = load_field(cfg, requested, described);
  const ml::HalfSpaceGrid grid = given ? given->grid() : requested;
  const ml::VectorField3 v =
      given ? *given : ml::curl_field(cfg.seed, 3, 1.0, ml::default_top_margin(grid), grid);
  const std::vector<double> eps = parse_eps(cfg.eps, grid.h(), {4.0, 2.0});

  const double v0 = ml::lp_norm(v, 2.0);
  const ml::JBounds bounds =
      ml::j_bounds(v, alpha, v0, ml::HolderMode::exact(), ml::kCalibratedJ1Constant);
  const double slack = 1.0 + cfg.tol;
  const double theta = alpha * (1.0 - alpha);

  bool passed = true;
  json rows = json::array();
  std::vector<std::pair<double, double>> sums;
  for (double e : eps) {
    const ml::JTerms t = ml::j_terms(v, e);
    const double moment = ml::stencil_moment(*ml::make_stencil(ml::standard_kernel(), e, grid.h()), theta);
    const bool ok_identity = t.identity_residual <= 1e-12;
    const bool ok_sum = t.sum_residual <= 1e-10;
    const bool ok_j2 = std::abs(t.j2) <= bounds.b2 * slack;
    const bool ok_j3 = std::abs(t.j3) <= bounds.b3 * slack;
    const bool ok_moment = moment <= std::pow(e, theta) * (1.0 + 1e-12);
    passed = passed && ok_identity && ok_sum && ok_j2 && ok_j3 && ok_moment;
    json row = ml::to_json(t);
    row["j1_ratio"] = bounds.b1 > 0.0 ? std::abs(t.j1) / bounds.b1 : 0.0;
    row["stencil_moment"] = moment;
    row["checks"] = {{"identity", ok_identity}, {"sum_rule", ok_sum}, {"j2_bound", ok_j2},
                     {"j3_bound", ok_j3},       {"moment", ok_moment}};
    rows.push_back(row);
    if (std::abs(t.sum) > 0.0) sums.emplace_back(e, std::abs(t.sum));
  }
  json config = config_json(cfg, grid, eps);
  config["field_spec"] = described;
  json report = {{"header", ml::report_header("commutator", config)},
                 {"bounds", ml::to_json(bounds)},
                 {"rows", rows}};
  report["sum_rate"] = sums.size() >= 3 && sums.size() == eps.size()
                           ? ml::to_json(ml::fit_rate(sums))
                           : json(nullptr);
  return finish(cfg, std::move(report), passed);
}

// ---------------------------------------------------------------- energy

ml::TimeSeries build_series(const RunConfig& cfg, const ml::HalfSpaceGrid& grid, double nu,
                            double alpha, json& described) {
  if (cfg.snapshots < 3) throw UsageError("--snapshots must be at least 3");
  const double t_final = parse_number(cfg.t_final, "t-final");
  if (!(t_final > 0.0)) throw UsageError("--t-final must be positive");
  std::vector<double> times;
  for (int j = 0; j < cfg.snapshots; ++j) times.push_back(t_final * j / (cfg.snapshots - 1));

  if (cfg.series == "stokes") {
    described = {{"kind", "stokes"}, {"A", 1.0}, {"m", 1}, {"top_buffer", grid.n3() / 4}};
    return ml::exact_stokes_shear(1.0, 1, nu, grid, times, grid.n3() / 4);
  }
  // Fixed spatial profile W with v(t) = a(t) W and exact a'(t).
  const ml::VectorField3 W =
      cfg.series == "zero" ? ml::VectorField3::zeros(grid)
                           : ml::weierstrass_field(alpha, cfg.seed, -1, 2.0, 1.0,
                                                   ml::default_top_margin(grid), grid);
  described = {{"kind", cfg.series}, {"profile", "a(t) = 1 + sin(3 t) / 2"}};
  ml::TimeSeries s{grid, times, {}, {}};
  for (double t : times) {
    s.snapshots.push_back((1.0 + 0.5 * std::sin(3.0 * t)) * W);
    s.derivatives.push_back((1.5 * std::cos(3.0 * t)) * W);
  }
  return s;
}

int cmd_energy(const RunConfig& cfg) {
  require_tol(cfg);
  if (cfg.nu.empty()) throw UsageError("energy needs --nu");
  const double nu = parse_number(cfg.nu, "nu");
  if (!(nu >= 0.0)) throw UsageError("--nu must be nonnegative");
  if (cfg.series != "stokes" && cfg.series != "zero" && cfg.series != "weierstrass")
    throw UsageError("--series must be stokes, zero or weierstrass");
  const double alpha = alpha_of(cfg);
  const double beta = cfg.beta.empty() ? 1.9 : parse_number(cfg.beta, "beta");
  const ml::ExponentBundle bundle = ml::make_bundle(alpha, beta, parse_optional(cfg.q, "q"));
  if (!bundle.valid.q_in_window) throw UsageError("--q outside the admissible window");

  const ml::HalfSpaceGrid grid = parse_grid(cfg);
  const std::vector<double> eps = parse_eps(cfg.eps, grid.h(), {4.0, 2.0, 1.0});
  json described;
  const ml::TimeSeries series = build_series(cfg, grid, nu, alpha, described);

  ml::StudyOptions opts;
  opts.bound.holder = ml::HolderMode::windowed(8.0);
  const ml::EnergyReport rep = ml::convergence_study(series, nu, eps, alpha, beta, bundle.q, opts);

  const double slack = 1.0 + cfg.tol;
  bool ok_split = true, ok_bound = true, ok_conv = true, ok_monotone = true;
  for (std::size_t n = 0; n < rep.rows.size(); ++n) {
    const ml::BalanceRow& r = rep.rows[n];
    const double scale = std::max({std::abs(r.i1), std::abs(r.i2), std::abs(r.term_dt), 1e-300});
    ok_split = ok_split && std::abs(r.i1 + r.i2 - r.term_dt) <= 1e-10 * scale;
    ok_bound = ok_bound && r.bound && std::abs(r.i2) <= *r.bound * slack;
    if (cfg.series == "stokes") {
      ok_conv = ok_conv && std::abs(r.term_conv) <= 1e-10;
      if (n > 0)
        ok_monotone = ok_monotone &&
                      std::abs(r.residual) <= std::abs(rep.rows[n - 1].residual) * 1.05;
    }
  }
  const bool passed = ok_split && ok_bound && ok_conv && ok_monotone;

  json config = config_json(cfg, grid, eps);
  config["beta"] = beta;
  config["q"] = bundle.q;
  config["series_spec"] = described;
  json report = {{"header", ml::report_header("energy", config)},
                 {"study", ml::to_json(rep)},
                 {"checks",
                  {{"i_split", ok_split},
                   {"i2_bound", ok_bound},
                   {"conv_zero", ok_conv},
                   {"residual_monotone", ok_monotone}}}};
  if (!cfg.csv.empty()) write_text(cfg.csv, ml::to_csv(rep));
  return finish(cfg, std::move(report), passed);
}

// ------------------------------------------------------------- exponents

int cmd_exponents(const RunConfig& cfg) {
  const double alpha = alpha_of(cfg);
  const double b0 = ml::beta0(alpha);
  const double beta = cfg.beta.empty() ? 0.5 * (b0 + 2.0) : parse_number(cfg.beta, "beta");
  if (!(beta >= 1.0 && beta <= 2.0)) throw UsageError("--beta must lie in [1, 2]");
  const ml::ExponentBundle b = ml::make_bundle(alpha, beta, parse_optional(cfg.q, "q"));
  if (!b.valid.q_in_window) throw UsageError("--q outside the admissible window");

  const bool passed = b.valid.conjugate && b.valid.r_forms_agree;
  json config = {{"alpha", cfg.alpha}, {"beta", beta}, {"q", b.q}};
  json report = {{"header", ml::report_header("exponents", config)},
                 {"bundle", ml::to_json(b)},
                 {"margin_threshold", ml::margin_threshold(alpha)},
                 {"remark37", ml::remark37_check(beta)}};
  return finish(cfg, std::move(report), passed);
}

// -------------------------------------------------------------- options

void add_common(CLI::App* app, RunConfig& cfg) {
  app->add_option("--grid", cfg.grid, "N or N1xN2xN3 nodes (lemmas 64, others 32)");
  app->add_option("--h", cfg.h, "grid step (default 1/N1)");
  app->add_option("--eps", cfg.eps, "comma separated eps values, e.g. 2h,4h or 0.0625");
  app->add_option("--alpha", cfg.alpha, "Hoelder exponent");
  app->add_option("--field", cfg.field, "MLF1 field file or JSON generator spec");
  app->add_option("--seed", cfg.seed, "seed of the default curl field");
  app->add_option("--tol", cfg.tol, "relative slack on constants");
  app->add_option("--out", cfg.out, "JSON report path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convolution-translation mollifier laboratory"};
  // --h is the grid step, so help is only reachable as --help.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(ml::kVersion));
  app.require_subcommand(1);
  RunConfig cfg;

  auto* lemmas = app.add_subcommand("lemmas", "Hoelder estimates and basic properties of S_eps");
  auto* commutator = app.add_subcommand("commutator", "Commutator identity and J-term bounds");
  auto* energy = app.add_subcommand("energy", "Smoothed energy balance and its limit");
  auto* exponents = app.add_subcommand("exponents", "Exponent bundle for (alpha, beta, q)");
  for (auto* sub : {lemmas, commutator, energy}) add_common(sub, cfg);
  energy->add_option("--nu", cfg.nu, "viscosity");
  energy->add_option("--beta", cfg.beta, "time integrability of the seminorm");
  energy->add_option("--q", cfg.q, "interpolation exponent");
  energy->add_option("--series", cfg.series, "stokes | zero | weierstrass");
  energy->add_option("--snapshots", cfg.snapshots, "number of snapshots");
  energy->add_option("--t-final", cfg.t_final, "final time");
  energy->add_option("--emit-csv", cfg.csv, "CSV path for the per-eps rows");
  exponents->add_option("--alpha", cfg.alpha, "Hoelder exponent")->required();
  exponents->add_option("--beta", cfg.beta, "time exponent in [1, 2]");
  exponents->add_option("--q", cfg.q, "interpolation exponent");
  exponents->add_option("--out", cfg.out, "JSON report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*lemmas) return cmd_lemmas(cfg);
    if (*commutator) return cmd_commutator(cfg);
    if (*energy) return cmd_energy(cfg);
    return cmd_exponents(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ml::LabError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
