#include "mollify_lab/error.hpp"

namespace mollify_lab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_exponent: return "invalid-exponent";
    case ErrorCode::invalid_radius: return "invalid-radius";
    case ErrorCode::under_resolved_kernel: return "under-resolved-kernel";
    case ErrorCode::truncation_contamination: return "truncation-contamination";
    case ErrorCode::misaligned_translation: return "misaligned-translation";
    case ErrorCode::grid_mismatch: return "grid-mismatch";
    case ErrorCode::rate_undefined: return "rate-undefined";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::format_error: return "format-error";
  }
  return "unknown";
}

}  // namespace mollify_lab
