#pragma once

#include <iosfwd>

namespace saddle {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitIo = 4;

/// Entry point of `saddle-tiler`; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace saddle
