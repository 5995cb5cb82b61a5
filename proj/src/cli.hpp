#ifndef AACONTROL_CLI_HPP
#define AACONTROL_CLI_HPP

#include <ostream>

namespace aac::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,       // bad arguments or malformed spec
  kHypothesis = 2,  // H1 or H2 fails, or the closed loop is not hyperbolic
  kSolver = 3,
  kSimulation = 4,
  kIo = 5,
  kMismatch = 6,  // `example` computed a value outside its tolerance
};

/// Entry point of `aactl`; all text goes to `out` and `err`, files only
/// under an explicit output directory.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aac::cli

#endif  // AACONTROL_CLI_HPP
