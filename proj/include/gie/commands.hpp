#pragma once

#include <string>
#include <vector>

#include "gie/config.hpp"
#include "json.hpp"

namespace gie::io {

struct CommandOptions {
  std::string out_dir;  // empty: nothing is written
  bool golden = false;
  unsigned threads = 1;
};

/// Exit codes: 0 success, 1 a check or golden comparison failed.
/// Errors propagate as gie::Error.
struct CommandResult {
  int exit_code = 0;
  std::string text;
  nlohmann::json report;
  std::vector<std::string> files;
};

CommandResult cmd_feasibility(const RunConfig& cfg, const CommandOptions& opt);
CommandResult cmd_dynamics(const RunConfig& cfg, const CommandOptions& opt);
CommandResult cmd_sweep(const RunConfig& cfg, const CommandOptions& opt);
CommandResult cmd_rate(const RunConfig& cfg, const CommandOptions& opt);
CommandResult cmd_validate(const RunConfig& cfg, const CommandOptions& opt);

CommandResult run_command(Mode mode, const RunConfig& cfg, const CommandOptions& opt);

/// One row of the feasibility table.
struct FeasibilityRow {
  std::string key;
  std::string label;
  std::string unit;
  double value = 0.0;
};

std::vector<FeasibilityRow> feasibility_rows(const RunConfig& cfg);

}  // namespace gie::io
