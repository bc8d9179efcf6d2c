#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace orthcert {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitUsage = 2 };

/// Runs one subcommand (args excludes the program name). JSON goes to `out` or the --out file,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orthcert
