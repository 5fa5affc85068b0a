#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace streamfilt::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationError = 1,
  kIoError = 2,
};

/// Runs the `streamfilt` command line. `args` excludes the program name.
/// Reports go to `out`; diagnostics and the resolved-configuration JSON
/// line go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace streamfilt::cli
