#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isocone {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitPass = 0,          // computed, certified, or the check passed
  kExitRefuted = 1,       // the check produced a counterexample
  kExitInvalid = 2,       // unreadable input, schema or argument errors
  kExitNumeric = 3,       // numeric failure or an internal consistency violation
  kExitInconclusive = 4,  // neither certified nor refuted
};

// Runs `isocone <args...>` (args excludes the program name). The JSON report
// goes to `out` (or to the --out file); diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isocone
