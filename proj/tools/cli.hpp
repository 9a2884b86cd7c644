#pragma once

#include <iosfwd>

namespace lcm::cli {

inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kInfeasible = 2;
inline constexpr int kNoConvergence = 3;
inline constexpr int kBadInput = 4;

/// Full command line, argv[0] included. Machine output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lcm::cli
