#pragma once

#include "pcgrasp/planner.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pcgrasp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitNotConverged = 3;

/// Runs one command line (args exclude the program name). Summaries go to
/// out, diagnostics to err; the return value is the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

/// Planner settings as JSON with PlannerConfig field names, plus
/// points_per_link and sample_seed. Unknown keys throw std::invalid_argument.
struct CliPlanSettings {
  PlannerConfig planner;
  int points_per_link = 100;
  std::uint64_t sample_seed = 0;
};
void apply_config_json(const nlohmann::json& doc, CliPlanSettings& settings);
nlohmann::json config_to_json(const CliPlanSettings& settings);

/// "a,b,c" or whitespace separated numbers, or a file holding them.
JointConfig parse_joint_vector(const std::string& text);

}  // namespace pcgrasp
