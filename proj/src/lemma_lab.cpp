#include "mollify_lab/lemma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "mollify_lab/error.hpp"
#include "mollify_lab/kernel.hpp"
#include "mollify_lab/mollifier.hpp"

namespace mollify_lab {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw LabError(ErrorCode::invalid_exponent, "alpha must lie in (0, 1]");
}

void require_eps_list(const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw LabError(ErrorCode::invalid_argument, "empty eps list");
}

void require_zero_trace(const VectorField3& u) {
  const std::size_t layer = u.grid().layer_size();
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t m = 0; m < layer; ++m)
      if (u[c].values()[m] != 0.0)
        throw LabError(ErrorCode::invalid_argument, "field must vanish on x3 = 0");
}

double seminorm_of(const VectorField3& u, double alpha, const LemmaConfig& config) {
  return config.seminorm ? *config.seminorm : holder_seminorm(u, alpha, config.holder);
}

LemmaVerdict vacuous(std::string name, const std::vector<double>& eps_list,
                     std::optional<double> theoretical) {
  LemmaVerdict v;
  v.lemma = std::move(name);
  v.eps_list = eps_list;
  v.constant_theoretical = theoretical;
  v.vacuous = true;
  v.passed = true;
  v.details["note"] = "zero seminorm, nothing to bound";
  return v;
}

std::optional<RateReport> fit_if_possible(const std::vector<double>& eps,
                                          const std::vector<double>& values) {
  // Exact zeros (eps = h makes several operators the identity) carry no rate.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t n = 0; n < eps.size(); ++n)
    if (values[n] > 0.0) pts.emplace_back(eps[n], values[n]);
  if (pts.size() < 3) return std::nullopt;
  return fit_rate(std::move(pts), true);
}

// Shared body of the four sup-norm estimates: quantity(eps) / scale(eps)
// against the theoretical constant, plus the slope of quantity vs eps.
LemmaVerdict ratio_check(std::string name, const std::vector<double>& eps_list, double theoretical,
                         const LemmaConfig& config, const std::function<double(double)>& quantity,
                         const std::function<double(double)>& scale) {
  LemmaVerdict v;
  v.lemma = std::move(name);
  v.eps_list = eps_list;
  v.constant_theoretical = theoretical;
  v.slope_floor = config.slope_floor;
  std::vector<double> values, ratios;
  for (double eps : eps_list) {
    values.push_back(quantity(eps));
    ratios.push_back(values.back() / scale(eps));
  }
  v.constant_measured = *std::max_element(ratios.begin(), ratios.end());
  v.margin = theoretical * (1.0 + config.tol) - v.constant_measured;
  v.rate = fit_if_possible(eps_list, values);
  v.passed = v.margin >= 0.0;
  if (config.slope_floor) {
    const bool slope_ok = v.rate && v.rate->slope >= *config.slope_floor;
    if (v.rate) v.rate->passed = slope_ok;
    else v.details["note"] = "slope floor set but fewer than three nonzero values to fit";
    v.passed = v.passed && slope_ok;
  }
  v.details["values"] = values;
  v.details["ratios"] = ratios;
  return v;
}

double tensor_sup(const TensorField& t) { return t.magnitude().max_abs(); }

TensorField kernel_gradient(const VectorField3& u, double eps, bool translated) {
  std::array<ScalarField, 9> e = {u[0], u[0], u[0], u[0], u[0], u[0], u[0], u[0], u[0]};
  for (std::size_t i = 0; i < 3; ++i) {
    const VectorField3 g =
        translated ? grad_conv_translate_kernel(u[i], eps) : mollify_gradient(u[i], eps);
    for (std::size_t j = 0; j < 3; ++j) e[3 * i + j] = g[j];
  }
  return TensorField(std::move(e));
}

// max over nodes of a / b, where b == 0 forces a == 0 (else infinity).
double max_quotient(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (a[n] == 0.0) continue;
    if (b[n] == 0.0) return std::numeric_limits<double>::infinity();
    m = std::max(m, a[n] / b[n]);
  }
  return m;
}

LemmaVerdict stability_verdict(std::string name, const std::vector<double>& eps_list,
                               const std::vector<double>& constants, double window) {
  LemmaVerdict v;
  v.lemma = std::move(name);
  v.eps_list = eps_list;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double c : constants) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  v.constant_measured = hi;
  v.details["constants"] = constants;
  if (hi == 0.0) {
    v.vacuous = true;
    v.passed = true;
    return v;
  }
  const double spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  v.details["spread"] = std::isfinite(spread) ? nlohmann::json(spread) : nlohmann::json("inf");
  v.margin = window - spread;
  v.passed = std::isfinite(hi) && spread <= window;
  return v;
}

double max_on_layers(const ScalarField& f, std::size_t last_layer) {
  const std::size_t layer = f.grid().layer_size();
  double m = 0.0;
  const std::size_t end = std::min(f.grid().n3(), last_layer + 1) * layer;
  for (std::size_t n = 0; n < end; ++n) m = std::max(m, std::abs(f.values()[n]));
  return m;
}

}  // namespace

double interior_divergence(const VectorField3& v) {
  return max_on_layers(divergence(v), v.grid().n3() - 2);
}

LemmaVerdict check_conv20(const VectorField3& u, double alpha, const std::vector<double>& eps_list,
                          const LemmaConfig& config) {
  require_alpha(alpha);
  require_eps_list(eps_list);
  require_zero_trace(u);
  const double semi = seminorm_of(u, alpha, config);
  if (semi == 0.0) return vacuous("conv20", eps_list, 1.0);
  LemmaVerdict v = ratio_check(
      "conv20", eps_list, 1.0, config,
      [&](double eps) { return lp_norm(mollify(u, eps) - u, kInfinity); },
      [&](double eps) { return semi * std::pow(eps, alpha); });
  v.details["seminorm"] = semi;
  return v;
}

LemmaVerdict check_conv30(const VectorField3& u, double alpha, const std::vector<double>& eps_list,
                          const LemmaConfig& config) {
  require_alpha(alpha);
  require_eps_list(eps_list);
  require_zero_trace(u);
  const double semi = seminorm_of(u, alpha, config);
  const double crho = standard_kernel().c_rho;
  if (semi == 0.0) return vacuous("conv30", eps_list, crho);
  LemmaVerdict v = ratio_check(
      "conv30", eps_list, crho, config,
      [&](double eps) { return tensor_sup(kernel_gradient(u, eps, false)); },
      [&](double eps) { return semi * std::pow(eps, alpha - 1.0); });
  v.details["seminorm"] = semi;
  return v;
}

LemmaVerdict check_conv1p(const VectorField3& u, double alpha, double epsilon,
                          const std::vector<LatticeOffset>& y_list, const LemmaConfig& config) {
  require_alpha(alpha);
  if (y_list.empty()) throw LabError(ErrorCode::invalid_argument, "empty probe list");
  const double semi = seminorm_of(u, alpha, config);
  LemmaVerdict v;
  v.lemma = "conv1p";
  v.eps_list = {epsilon};
  v.constant_theoretical = 1.0;
  if (semi == 0.0) return vacuous("conv1p", {epsilon}, 1.0);
  const VectorField3 t = translate(u, epsilon);
  const HalfSpaceGrid& g = u.grid();
  std::vector<double> ratios;
  for (const auto& y : y_list) {
    double sup = 0.0;
    for (std::size_t k = 0; k < g.n3(); ++k)
      for (std::size_t j = 0; j < g.n2(); ++j)
        for (std::size_t i = 0; i < g.n1(); ++i) {
          double s = 0.0;
          for (std::size_t c = 0; c < 3; ++c) {
            const double d = t[c].sample(static_cast<std::int64_t>(i) + y.a,
                                         static_cast<std::int64_t>(j) + y.b,
                                         static_cast<std::int64_t>(k) + y.c) -
                             t[c](i, j, k);
            s += d * d;
          }
          sup = std::max(sup, std::sqrt(s));
        }
    const double len = g.h() * std::sqrt(static_cast<double>(y.a * y.a + y.b * y.b + y.c * y.c));
    ratios.push_back(len == 0.0 ? (sup == 0.0 ? 0.0 : kInfinity) : sup / (std::pow(len, alpha) * semi));
  }
  v.constant_measured = *std::max_element(ratios.begin(), ratios.end());
  v.margin = (1.0 + config.tol) - v.constant_measured;
  v.passed = v.margin >= 0.0;
  v.details["ratios"] = ratios;
  v.details["seminorm"] = semi;
  return v;
}

LemmaVerdict check_conv2p(const VectorField3& u, double alpha, const std::vector<double>& eps_list,
                          const LemmaConfig& config) {
  require_alpha(alpha);
  require_eps_list(eps_list);
  const double semi = seminorm_of(u, alpha, config);
  const double theoretical = std::pow(3.0, alpha);
  if (semi == 0.0) return vacuous("conv2p", eps_list, theoretical);
  LemmaVerdict v = ratio_check(
      "conv2p", eps_list, theoretical, config,
      [&](double eps) { return lp_norm(conv_translate(u, eps) - u, kInfinity); },
      [&](double eps) { return semi * std::pow(eps, alpha); });
  v.details["seminorm"] = semi;
  return v;
}

LemmaVerdict check_conv3p(const VectorField3& u, double alpha, const std::vector<double>& eps_list,
                          const LemmaConfig& config) {
  require_alpha(alpha);
  require_eps_list(eps_list);
  const double semi = seminorm_of(u, alpha, config);
  const double crho = standard_kernel().c_rho;
  if (semi == 0.0) return vacuous("conv3p", eps_list, crho);
  LemmaVerdict v = ratio_check(
      "conv3p", eps_list, crho, config,
      [&](double eps) { return tensor_sup(kernel_gradient(u, eps, true)); },
      [&](double eps) { return semi * std::pow(eps, alpha - 1.0); });
  v.details["seminorm"] = semi;
  return v;
}

std::vector<LemmaVerdict> check_basic_properties(const VectorField3& u,
                                                 const std::vector<double>& eps_list,
                                                 const std::vector<double>& r_list,
                                                 const LemmaConfig& config) {
  require_eps_list(eps_list);
  if (r_list.empty()) throw LabError(ErrorCode::invalid_argument, "empty r list");
  const HalfSpaceGrid& g = u.grid();
  const double h = g.h();
  std::vector<double> eps_sorted = eps_list;
  std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<>());

  std::vector<VectorField3> S;
  std::vector<TensorField> gradS;
  for (double eps : eps_sorted) {
    S.push_back(conv_translate(u, eps));
    gradS.push_back(gradient(S.back()));
  }
  std::vector<LemmaVerdict> out;

  // (i) support and trace.
  {
    LemmaVerdict v;
    v.lemma = "prop4.5(i) support";
    v.eps_list = eps_sorted;
    v.constant_theoretical = 0.0;
    for (std::size_t n = 0; n < S.size(); ++n) {
      const double layers = std::floor(eps_sorted[n] / h - 1.0 + 1e-9);
      if (layers < 0.0) continue;
      const std::size_t top = static_cast<std::size_t>(layers);
      v.constant_measured = std::max(v.constant_measured, S[n].magnitude().max_abs() > 0.0
                                                              ? max_on_layers(S[n].magnitude(), top)
                                                              : 0.0);
    }
    v.passed = v.constant_measured == 0.0;
    v.vacuous = u.is_zero();
    out.push_back(std::move(v));
  }
  {
    LemmaVerdict v;
    v.lemma = "prop4.5(i) trace";
    v.eps_list = eps_sorted;
    v.constant_theoretical = 0.0;
    for (const auto& s : S) v.constant_measured = std::max(v.constant_measured, max_on_layers(s.magnitude(), 0));
    v.passed = v.constant_measured == 0.0;
    v.vacuous = u.is_zero();
    out.push_back(std::move(v));
  }

  // (ii) divergence commutes with S_eps.
  {
    LemmaVerdict v;
    v.lemma = "prop4.5(ii) divergence commutation";
    v.eps_list = eps_sorted;
    v.constant_theoretical = 0.0;
    const ScalarField div_u = divergence(u);
    std::vector<double> skipped;
    for (std::size_t n = 0; n < S.size(); ++n) {
      if (!div_u.is_zero() && div_u.support_margin() < kernel_radius_nodes(eps_sorted[n], h)) {
        skipped.push_back(eps_sorted[n]);
        continue;
      }
      const ScalarField diff = divergence(S[n]) - conv_translate(div_u, eps_sorted[n]);
      v.constant_measured = std::max(v.constant_measured, max_on_layers(diff, g.n3() - 2));
    }
    v.details["skipped_eps"] = skipped;
    v.margin = 1e-12 - v.constant_measured;
    v.passed = v.margin >= 0.0;
    out.push_back(std::move(v));
  }

  // Maximal-function dominations and the first-order error bound. The ball
  // radius 3 eps covers every point S_eps draws from; eps whose ball would
  // exceed the radius cap are left out rather than compared against a
  // truncated maximal function.
  {
    const ScalarField mag_u = u.magnitude();
    const ScalarField mag_grad = gradient(u).magnitude();
    const double cap = static_cast<double>(config.max_radius_nodes) * h;
    std::vector<double> radii, used_eps, skipped;
    std::vector<std::size_t> used;
    for (std::size_t n = 0; n < eps_sorted.size(); ++n) {
      if (3.0 * eps_sorted[n] > cap * (1.0 + 1e-12)) {
        skipped.push_back(eps_sorted[n]);
        continue;
      }
      used.push_back(n);
      used_eps.push_back(eps_sorted[n]);
      radii.push_back(3.0 * eps_sorted[n]);
    }
    const auto M_u = maximal_function_multi(mag_u, radii);
    const auto M_grad = maximal_function_multi(mag_grad, radii);
    std::vector<double> c_val, c_grad, c_err;
    for (std::size_t m = 0; m < used.size(); ++m) {
      const std::size_t n = used[m];
      c_val.push_back(max_quotient(S[n].magnitude().values(), M_u[m].values()));
      c_grad.push_back(max_quotient(gradS[n].magnitude().values(), M_grad[m].values()));
      const ScalarField err = (S[n] - u).magnitude();
      const ScalarField denom = eps_sorted[n] * (M_u[m] + M_grad[m]);
      c_err.push_back(max_quotient(err.values(), denom.values()));
    }
    auto v1 = stability_verdict("prop4.5(iii) maximal domination", used_eps, c_val,
                                config.stability_window);
    auto v2 = stability_verdict("prop4.5(iii) gradient maximal domination", used_eps, c_grad,
                                config.stability_window);
    auto v3 = stability_verdict("prop4.5(iii) first-order error", used_eps, c_err,
                                config.stability_window);
    for (auto* v : {&v1, &v2, &v3}) {
      v->details["radii"] = radii;
      v->details["skipped_eps"] = skipped;
    }
    out.push_back(std::move(v1));
    out.push_back(std::move(v2));
    out.push_back(std::move(v3));
  }

  // (iv) L^r stability of S_eps and of its gradient.
  const TensorField grad_u = gradient(u);
  for (double r : r_list) {
    const double base = lp_norm(u, r);
    const double base_grad = lp_norm(grad_u, r);
    std::vector<double> c, cg;
    for (std::size_t n = 0; n < S.size(); ++n) {
      c.push_back(base > 0.0 ? lp_norm(S[n], r) / base : 0.0);
      cg.push_back(base_grad > 0.0 ? lp_norm(gradS[n], r) / base_grad : 0.0);
    }
    auto v = stability_verdict("prop4.5(iv) L^r stability", eps_sorted, c, config.stability_window);
    v.details["r"] = r;
    out.push_back(std::move(v));
    auto vg = stability_verdict("prop4.5(iv) gradient L^r stability", eps_sorted, cg,
                                config.stability_window);
    vg.details["r"] = r;
    out.push_back(std::move(vg));
  }

  // (v) strong convergence: first-order L^r rate for smooth u.
  {
    LemmaVerdict v;
    v.lemma = "prop4.5(v) L^r rate";
    v.eps_list = eps_sorted;
    v.slope_floor = config.slope_floor.value_or(0.9);
    std::vector<double> errs;
    for (const auto& s : S) errs.push_back(lp_norm(s - u, r_list.front()));
    v.details["errors"] = errs;
    v.details["r"] = r_list.front();
    v.rate = fit_if_possible(eps_sorted, errs);
    if (u.is_zero() || !v.rate) {
      v.vacuous = true;
      v.passed = true;
      v.details["note"] = u.is_zero() ? "zero field" : "fewer than three nonzero errors, no fit";
    } else {
      v.passed = v.rate->slope >= *v.slope_floor;
      v.rate->passed = v.passed;
      v.constant_measured = v.rate->slope;
    }
    out.push_back(std::move(v));
  }
  {
    LemmaVerdict v;
    v.lemma = "prop4.5(v) W^{1,2} monotone";
    v.eps_list = eps_sorted;
    std::vector<double> errs;
    for (std::size_t n = 0; n < S.size(); ++n) {
      const double a = lp_norm(S[n] - u, 2.0);
      const double b = lp_norm(gradS[n] - grad_u, 2.0);
      errs.push_back(std::sqrt(a * a + b * b));
    }
    v.details["errors"] = errs;
    v.passed = true;
    for (std::size_t n = 1; n < errs.size(); ++n)
      if (errs[n] > errs[n - 1] * 1.05) v.passed = false;
    v.vacuous = u.is_zero();
    out.push_back(std::move(v));
  }
  return out;
}

LemmaVerdict check_admissibility(const VectorField3& u, double epsilon, const LemmaConfig&) {
  LemmaVerdict v;
  v.lemma = "prop4.7 admissibility";
  v.eps_list = {epsilon};
  v.constant_theoretical = 0.0;
  const VectorField3 d = double_smooth(u, epsilon);
  const double trace = max_on_layers(d.magnitude(), 0);
  const double div_in = interior_divergence(u);
  const bool solenoidal = div_in <= 1e-12;
  v.details["boundary_max"] = trace;
  v.details["input_divergence"] = div_in;
  v.details["solenoidal_input"] = solenoidal;
  v.passed = trace == 0.0;
  v.constant_measured = trace;
  if (solenoidal) {
    const double div_out = interior_divergence(d);
    v.details["output_divergence"] = div_out;
    v.passed = v.passed && div_out <= 1e-12;
  }
  v.vacuous = u.is_zero();
  return v;
}

nlohmann::json to_json(const LemmaVerdict& v) {
  nlohmann::json j = {{"lemma", v.lemma},
                      {"constant_measured", std::isfinite(v.constant_measured)
                                                ? nlohmann::json(v.constant_measured)
                                                : nlohmann::json("inf")},
                      {"eps_list", v.eps_list},
                      {"vacuous", v.vacuous},
                      {"passed", v.passed},
                      {"details", v.details}};
  j["constant_theoretical"] =
      v.constant_theoretical ? nlohmann::json(*v.constant_theoretical) : nlohmann::json(nullptr);
  j["slope"] = v.rate ? nlohmann::json(v.rate->slope) : nlohmann::json(nullptr);
  j["slope_floor"] = v.slope_floor ? nlohmann::json(*v.slope_floor) : nlohmann::json(nullptr);
  if (v.rate) j["rate"] = to_json(*v.rate);
  return j;
}

}  // namespace mollify_lab
