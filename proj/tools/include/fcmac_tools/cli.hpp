#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fcmac::tools {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // expectation failed or spec infeasible
inline constexpr int kExitUsage = 2;   // bad arguments, unreadable or invalid input

// Runs the `fcmac` command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fcmac::tools
