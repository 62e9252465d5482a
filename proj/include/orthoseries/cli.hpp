#pragma once

#include <iosfwd>

namespace orthoseries::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv, runs one subcommand and returns its exit code (0, 1 or 2).
int dispatch(int argc, const char* const* argv);
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace orthoseries::cli
