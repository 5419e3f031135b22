#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sparseid::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,  // bad flags, unreadable or malformed input, I/O failures
  kIncompatible = 2,
  kStalled = 3,
  kBudgetExceeded = 4,
  kNotEquivalent = 5,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sparseid::cli
