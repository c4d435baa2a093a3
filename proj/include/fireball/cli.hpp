#pragma once

#include <iosfwd>

namespace fireball {

/// Exit codes besides 0 and CLI11's usage errors.
inline constexpr int kExitParseError = 1;
inline constexpr int kExitVerifyFailure = 2;
inline constexpr int kExitFuelExhausted = 3;

/// The `fireball` command line; `in` supplies terms read from stdin.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace fireball
