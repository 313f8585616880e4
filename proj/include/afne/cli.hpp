#pragma once

#include <ostream>

namespace afne::cli {

enum ExitCode : int {
  kPass = 0,
  kUsage = 1,
  kPropertyFailed = 2,
  kNumericFailure = 3,
};

/// Entry point of the `afne` tool. Subcommands: certify, iterate, resolvent,
/// semigroup, feasibility.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace afne::cli
