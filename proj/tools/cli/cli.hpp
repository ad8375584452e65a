#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace varbound::cli {

enum ExitCode : int {
  kOk = 0,          // success, or a feasible verdict
  kInfeasible = 1,  // the audit found a violated bound
  kUsageError = 2,  // malformed flags or input
};

/// Runs one command line (without the program name). Output is buffered and
/// written to `out` only when the command completes.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace varbound::cli
