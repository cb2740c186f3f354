#pragma once

#include <ostream>

namespace sliderule {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitInputError = 2, kExitAnalysisError = 3 };

/// Runs the `sliderule` command line:
///   render  --layout F --out F [--ticks F] [--offset MM] [--hairline MM] [--h MM]
///   analyze --kind K [--scale F]... [--h MM] [--a N] [--xc N] [--xr N] ...
///   serve   --port N [--host H]
/// Reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sliderule
