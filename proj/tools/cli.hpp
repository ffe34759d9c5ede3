#pragma once

#include <iosfwd>

namespace troppca::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kParse = 2;
inline constexpr int kNumeric = 3;

/// Runs the command line; "-" as an output path means `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace troppca::cli
