#pragma once

namespace hcs::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kConfigError = 2,
  kIncomplete = 3,
  kContradiction = 4,
  kBadInput = 5,
  kVerifyFailed = 6,
};

/// Parses argv, dispatches the subcommand and maps errors to exit codes.
int run(int argc, char** argv);

}  // namespace hcs::cli
