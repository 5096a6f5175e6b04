#pragma once

#include <iosfwd>

namespace signbal {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitParse = 3,
  kExitAlgorithm = 4,
  kExitGuard = 5,
};

// Entry point of the `signbal` tool. Reports go to `out` unless --out is
// given; diagnostics and timings go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace signbal
