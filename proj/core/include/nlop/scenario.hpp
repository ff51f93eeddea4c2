#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlop/config.hpp"

namespace nlop {

/// One acceptance contract of a scenario: a measured value compared
/// against a bound. The summary JSON enumerates every contract; nothing
/// is skipped silently.
struct ContractCheck {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  std::string relation;  // "<", "<=", ">=", "in [a,b]" (human-readable)
  bool passed = false;
};

struct ScenarioOutcome {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<ContractCheck> contracts;
  std::vector<std::string> artifacts;  // file paths written under out_dir
  bool passed = true;
  double elapsed_seconds = 0.0;

  nlohmann::json to_json() const;
};

struct ScenarioInfo {
  std::string name;
  std::string summary;
};

/// Registered scenarios with one-line summaries, in registry order.
std::vector<ScenarioInfo> list_scenarios();
bool is_scenario(const std::string& name);

/// Runs a registered scenario: writes deterministic artifacts plus a
/// summary.json into out_dir (created if missing) and returns the outcome.
/// Throws std::invalid_argument for unknown names and propagates config
/// errors.
ScenarioOutcome run_scenario(const std::string& name, const Config& cfg,
                             const std::string& out_dir, std::uint64_t seed);

/// Generic minimization driver: reads [kernel], [grid], [profile] and
/// [solve] sections, minimizes and writes field/report artifacts.
ScenarioOutcome run_solve(const Config& cfg, const std::string& out_dir, std::uint64_t seed);

}  // namespace nlop
