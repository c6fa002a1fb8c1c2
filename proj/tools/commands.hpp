#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace noisectl::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kConvergence = 3,
  kIo = 4,
};

/// Parses the command line and runs one subcommand (pdf, mc, cancel-drift,
/// sweep). Errors are reported on `err` and mapped to an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace noisectl::cli
