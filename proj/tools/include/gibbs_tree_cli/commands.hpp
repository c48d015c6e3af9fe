#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gibbs_tree::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitHypothesis = 2,
    kExitBudget = 3,
    kExitUsage = 64,
    kExitIo = 74,
};

/// Environment variable overriding the exhaustive-enumeration budget of `verify`.
inline constexpr const char* kMaxEnumEnv = "GIBBS_TREE_MAX_ENUM";

/// Parses args (without the program name) and runs the selected subcommand.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gibbs_tree::cli
