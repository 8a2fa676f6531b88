#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tcentroid::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // domain error, or a verify sweep found violations
inline constexpr int kExitUsage = 2;

/// Runs the tool on `args` (without the program name). Results go to `out`
/// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tcentroid::cli
