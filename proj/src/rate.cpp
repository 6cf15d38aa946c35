#include "mollify_lab/rate.hpp"

#include <algorithm>
#include <cmath>

#include "mollify_lab/error.hpp"

namespace mollify_lab {

RateReport fit_rate(std::vector<std::pair<double, double>> pairs, bool drop_preasymptotic) {
  if (pairs.size() < 3) throw LabError(ErrorCode::rate_undefined, "need at least 3 points");
  for (const auto& [eps, value] : pairs) {
    if (!(eps > 0.0)) throw LabError(ErrorCode::rate_undefined, "eps must be positive");
    if (!(value > 0.0) || !std::isfinite(value))
      throw LabError(ErrorCode::rate_undefined, "values must be positive and finite");
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t n = 1; n < pairs.size(); ++n)
    if (pairs[n].first == pairs[n - 1].first)
      throw LabError(ErrorCode::rate_undefined, "eps values must be distinct");

  RateReport report;
  report.pairs = pairs;
  std::size_t first = 0;
  if (drop_preasymptotic && pairs.size() >= 4) {
    first = 1;
    report.dropped_largest = true;
  }
  const double m = static_cast<double>(pairs.size() - first);
  double sx = 0.0, sy = 0.0;
  for (std::size_t n = first; n < pairs.size(); ++n) {
    sx += std::log(pairs[n].first);
    sy += std::log(pairs[n].second);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t n = first; n < pairs.size(); ++n) {
    const double dx = std::log(pairs[n].first) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(pairs[n].second) - my);
  }
  report.slope = sxy / sxx;
  report.constant = std::exp(my - report.slope * mx);
  return report;
}

nlohmann::json to_json(const RateReport& report) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& [eps, value] : report.pairs) pts.push_back({eps, value});
  return {{"pairs", pts},
          {"slope", report.slope},
          {"constant", report.constant},
          {"dropped_largest", report.dropped_largest},
          {"passed", report.passed}};
}

}  // namespace mollify_lab
