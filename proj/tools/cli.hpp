#pragma once

#include <iosfwd>

#include "fovea/error.hpp"

namespace fovea::cli {

enum ExitCode : int {
  kOk = 0,
  kBadArgs = 2,
  kIoError = 3,
  kInfeasibleGrid = 4,
};

int exit_code_for(ErrorCode code) noexcept;

/// Entry point of the `fovea` tool; returns the process exit code.
/// Subcommands: foveate, grid, dataset, eval, bench, fit.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fovea::cli
