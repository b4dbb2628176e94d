#pragma once

#include <ostream>

namespace qrange::cli {

enum ExitCode : int {
  kExitSuccess = 0,    // success, or the point is inside
  kExitNegative = 1,   // outside / infeasible; the certificate is still written
  kExitUsage = 2,      // bad flags or malformed input
  kExitCap = 3,        // a size or resource cap would be exceeded
  kExitUndecided = 4,  // numerical ambiguity band
};

/// Environment variable holding the worker thread count (default 1).
inline constexpr const char* kThreadsEnv = "QRANGE_THREADS";

inline constexpr int kMaxFacetsN = 3;
inline constexpr int kMaxMemberClassicalN = 5;
inline constexpr int kMaxMemberQuantumN = 3;

/// Parses argv[1..] and runs one command. Documents go to --out when given,
/// otherwise to `out`; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qrange::cli
