#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace irtforge {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitWarning = 2;  // completed, but something did not converge

// Entry point of the irtforge binary. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace irtforge
