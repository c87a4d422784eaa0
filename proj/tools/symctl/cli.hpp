#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symctl {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfigError = 2,
  kNumericalError = 3,
};

/// Entry point behind `symctl`. `args` excludes the program name.
///   run <config.json> [--out DIR] [--validate] [--threads N]
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symctl
