#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tocsp {

// Exit codes of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tocsp
