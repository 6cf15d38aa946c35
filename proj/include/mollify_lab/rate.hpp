#pragma once

#include <utility>
#include <vector>

#include "json.hpp"

namespace mollify_lab {

/// Least-squares fit of log(value) = slope log(eps) + log(constant).
struct RateReport {
  std::vector<std::pair<double, double>> pairs;  // (eps, value), eps decreasing
  double slope = 0.0;
  double constant = 0.0;
  bool dropped_largest = false;
  bool passed = false;
};

/// Needs at least 3 pairs with positive values and distinct eps. With
/// drop_preasymptotic and 4 or more pairs the largest eps is left out of the
/// fit (it stays in `pairs`). `passed` is left false for the caller to set.
RateReport fit_rate(std::vector<std::pair<double, double>> pairs, bool drop_preasymptotic = false);

nlohmann::json to_json(const RateReport& report);

}  // namespace mollify_lab
