#pragma once

// Command-line front end. `run` is the whole program minus process setup, so
// tests can drive it with in-memory streams.

#include <iosfwd>
#include <string>
#include <vector>

namespace normpar::cli {

enum ExitCode : int {
  kTrue = 0,
  kFalse = 1,
  kInconclusive = 2,
  kInputError = 3,
  kVerificationFailure = 4,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace normpar::cli
