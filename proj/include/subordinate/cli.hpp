#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace subordinate::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name). Output that
/// is not redirected with --output goes to `out`; diagnostics to `err`.
/// Returns 0 on success, 1 when a verify suite fails, 2 on usage or domain errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace subordinate::cli
