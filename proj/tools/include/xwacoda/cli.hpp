#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace xwacoda::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // validation, mapping, query errors
inline constexpr int kExitIo = 2;       // unreadable input, malformed XML, bad usage

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xwacoda::cli
