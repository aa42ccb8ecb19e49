#pragma once

#include <iosfwd>

namespace bergerflow {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitIntegration = 2, kExitVerification = 3 };

/// Runs the command-line tool on argv; all output goes to out and err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bergerflow
