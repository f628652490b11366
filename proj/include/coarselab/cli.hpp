#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coarselab::cli {

inline constexpr const char* kVersion = "0.1.0";

// Runs one command line (without the program name). Returns 0 on success,
// 1 when a check fails and 2 on invalid input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coarselab::cli
