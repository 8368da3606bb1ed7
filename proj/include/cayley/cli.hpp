#pragma once

#include <iosfwd>

namespace cayley::cli {

/// Exit codes: 0 success or check holds, 2 a mathematical check failed,
/// 1 usage or resource error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFalsified = 2;

/// Runs one command line. Reports go to `out` (or the --output file),
/// diagnostics and progress to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cayley::cli
