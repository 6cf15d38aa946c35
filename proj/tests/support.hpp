#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>

#include "doctest.h"
#include "mollify_lab/error.hpp"
#include "mollify_lab/field.hpp"

namespace test_support {

// Code of the LabError raised by f, or nullopt if nothing was thrown.
template <class F>
std::optional<mollify_lab::ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const mollify_lab::LabError& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Max over nodes with k in [k_lo, k_hi] and i, j at least `pad` away from the
// tangential wrap.
inline double max_abs_inner(const mollify_lab::ScalarField& f, std::size_t k_lo, std::size_t k_hi,
                            std::size_t pad = 0) {
  const auto& g = f.grid();
  double m = 0.0;
  for (std::size_t k = k_lo; k <= k_hi && k < g.n3(); ++k)
    for (std::size_t j = pad; j + pad < g.n2(); ++j)
      for (std::size_t i = pad; i + pad < g.n1(); ++i) m = std::max(m, std::abs(f(i, j, k)));
  return m;
}

// Sets MOLLIFY_LAB_THREADS for the lifetime of the object.
class ThreadEnv {
 public:
  explicit ThreadEnv(const char* value) {
    if (const char* old = std::getenv("MOLLIFY_LAB_THREADS")) old_ = old;
    setenv("MOLLIFY_LAB_THREADS", value, 1);
  }
  ~ThreadEnv() {
    if (old_) setenv("MOLLIFY_LAB_THREADS", old_->c_str(), 1);
    else unsetenv("MOLLIFY_LAB_THREADS");
  }
  ThreadEnv(const ThreadEnv&) = delete;
  ThreadEnv& operator=(const ThreadEnv&) = delete;

 private:
  std::optional<std::string> old_;
};

}  // namespace test_support
