#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmo::cli {

// Exit codes: 0 every check passed, 1 a check failed, 2 usage or input error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmo::cli
