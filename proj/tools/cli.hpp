#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace discode::cli {

/// Exit codes: 0 ok, 1 runtime failure, 2 bad flags, 3 finished with skipped input lines.
enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kSkipped = 3 };

/// Runs the `discode` command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace discode::cli
