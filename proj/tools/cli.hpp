#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace wavebasis::cli {

/// Entry point shared by the executable and the tests.  args[0] is the program name.
/// Returns 0 on success, 1 when a requested check fails, 2 on a usage or configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// JSON with every float printed to 17 significant digits.
std::string dump_json(const nlohmann::json& j, int indent = 2);

struct VerifyOptions {
  int n = 3;
  int p_max = 12;
  int samples = 20;
  std::uint64_t seed = 1;
};
/// Runs the identity suite; report["pass"] is the conjunction of all checks.
nlohmann::json run_verify(const VerifyOptions& o);

}  // namespace wavebasis::cli
