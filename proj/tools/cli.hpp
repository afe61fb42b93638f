#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tw::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInput = 2,
  kSubSolver = 3,
  kSat = 10,
  kUnsat = 20,
};

/// Runs one command line (without the program name). `in` backs the "-" path.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace tw::cli
