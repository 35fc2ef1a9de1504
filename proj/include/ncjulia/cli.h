#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ncjulia {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerdictFalse = 1,  // a B-point test failed or a sweep found violations
  kExitParseError = 2,    // malformed JSON, polynomial text or arguments
  kExitPrecondition = 3,  // e.g. a point outside G_delta, H outside Gamma(T)
  kExitInternal = 4,
};

/// Runs the tool on `args` (without the program name), writing reports to
/// `out` and diagnostics to `err`. Verbs: eval, bpoint, fuzz, derivative,
/// fixtures, schema.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ncjulia
