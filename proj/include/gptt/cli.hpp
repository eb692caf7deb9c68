#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gptt {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitNo = 1,
  kExitParse = 2,
  kExitDiagFailure = 3,
  kExitUnknown = 4,
};

/// Entry point of the gptt command line; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gptt
