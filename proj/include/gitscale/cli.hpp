#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gitscale {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDegenerate = 3;

/// Runs one command line (without the program name). Results go to files; progress
/// and warnings go to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gitscale
