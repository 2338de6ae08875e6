#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace seqalloc::cli {

// Exit codes.
inline constexpr int kOk = 0;          // success, or a "yes" decision
inline constexpr int kNo = 1;          // a "no" decision / rejected witness
inline constexpr int kUsage = 2;       // usage or input error
inline constexpr int kGuard = 3;       // size guard exceeded, or no exact algorithm
inline constexpr int kInternal = 4;    // a witness failed re-verification

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seqalloc::cli
