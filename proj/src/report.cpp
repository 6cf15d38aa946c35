#include "mollify_lab/report.hpp"

#include <cstdio>

#include "mollify_lab/field_io.hpp"
#include "mollify_lab/kernel.hpp"

namespace mollify_lab {

std::string config_hash(const nlohmann::json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

nlohmann::json report_header(const std::string& command, const nlohmann::json& config) {
  const MollifierKernel& k = standard_kernel();
  return {{"tool", "mollify_lab"},
          {"command", command},
          {"version", kVersion},
          {"kernel", {{"C", k.C}, {"c_rho", k.c_rho}}},
          {"config", config},
          {"config_hash", config_hash(config)}};
}

}  // namespace mollify_lab
