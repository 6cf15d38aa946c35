#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace mollify_lab {

inline constexpr const char* kVersion = "0.1.0";

/// FNV-1a of the compact JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

/// {"tool", "version", "kernel": {"C", "c_rho"}, "config", "config_hash"}.
nlohmann::json report_header(const std::string& command, const nlohmann::json& config);

}  // namespace mollify_lab
