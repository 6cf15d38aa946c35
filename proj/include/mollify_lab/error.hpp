#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mollify_lab {

enum class ErrorCode {
  invalid_argument,
  invalid_exponent,
  invalid_radius,
  under_resolved_kernel,
  truncation_contamination,
  misaligned_translation,
  grid_mismatch,
  rate_undefined,
  io_error,
  format_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code says which contract broke.
class LabError : public std::runtime_error {
 public:
  LabError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mollify_lab
