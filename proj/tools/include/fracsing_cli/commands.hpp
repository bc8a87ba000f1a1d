#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fracsing_cli/config.hpp"

namespace fracsing::cli {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitUsage = 1,
  /// Mathematical nonexistence or non-convergence.
  kExitNonexistence = 2,
};

int cmd_solve(const RunConfig& cfg, std::ostream& log);
int cmd_kstar(const RunConfig& cfg, std::ostream& log);
int cmd_stability(const RunConfig& cfg, std::ostream& log);
int cmd_mountain_pass(const RunConfig& cfg, std::ostream& log);
int cmd_classify(const RunConfig& cfg, std::ostream& log);
int cmd_eigen(const RunConfig& cfg, std::ostream& log);
int cmd_bifurcation(const RunConfig& cfg, std::ostream& log);

/// Names accepted as the first positional argument.
const std::vector<std::string>& command_names();

/// Dispatches a parsed command; maps library exceptions onto exit codes.
int dispatch(const std::string& command, const RunConfig& cfg, std::ostream& log);

/// Entry point: argument parsing, config loading, dispatch.
int run(int argc, char** argv);

}  // namespace fracsing::cli
