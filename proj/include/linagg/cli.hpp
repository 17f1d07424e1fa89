#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace linagg {

/// Exit codes of the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCheckFailed = 2;

/// Runs the tool on args (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace linagg
