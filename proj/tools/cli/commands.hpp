#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace infotweet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// Runs the tool with argv-style arguments (program name excluded).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace infotweet::cli
