#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arm::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,     // I/O, parse, configuration or numerical failure
  kNotConverged = 2,   // solver stopped at max_iters
};

/// Runs `arm <subcommand> ...`. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Applies ARM_NUM_THREADS (if set) to the dense kernels.
void apply_thread_env();

}  // namespace arm::cli
