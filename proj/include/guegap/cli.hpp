#ifndef GUEGAP_CLI_HPP
#define GUEGAP_CLI_HPP

#include <ostream>

namespace guegap {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitRuntime = 1,
  kExitUsage = 2,
  kExitPrecision = 3,
  kExitThreshold = 4,
};

/// Entry point of the guegap command line. Output goes to `out` unless --out
/// names a file; diagnostics go to `err`. Returns one of ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace guegap

#endif  // GUEGAP_CLI_HPP
