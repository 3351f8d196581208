// Scenario runner: config resolution, protocol dispatch, result
// serialization and the command-line entry point.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ckqed/protocols.hpp"

namespace ckqed::cli {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ScenarioConfig {
  std::string protocol;
  double a = 1.0;
  double b = 0.0;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
  double delta_width = 0.0;
  int n_pairs = 1;
  std::string mode = "ideal";
  bool postselect = false;
  int n_max = -1;
  double delta_ratio = 50.0;
  std::string outcomes;
  std::string out;
};

extern const std::vector<std::string> kProtocolNames;

/// Merge a JSON config file under the flag-named keys; unknown keys are a
/// config error.
ScenarioConfig load_config_file(const std::string& path);

/// Parameter validation against the chosen protocol's preconditions; no
/// computation is performed.
void validate_config(const ScenarioConfig& cfg);

/// Execute one protocol with branch-probability completeness enforced.
ProtocolReport run_protocol(const ScenarioConfig& cfg);

/// Result document for a single run (config echo, branch table,
/// diagnostics), numbers rounded to 12 significant digits.
std::string serialize_report(const ScenarioConfig& cfg, const ProtocolReport& report);

struct SweepSpec {
  std::string parameter;
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
};

/// Deterministic CSV over the grid; rows evaluate concurrently and are
/// gathered in grid order.
std::string run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec);

/// Exit codes: 0 success, 2 config error, 3 precondition failure,
/// 4 tolerance failure.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ckqed::cli
