#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wmset/error.hpp"

namespace wmset::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kBadArgument = 2,
  kContractFail = 3,
  kComputation = 4,
  kConfigParse = 64,
};

int exit_code(Errc code);

/// Runs one command line (args excludes the program name). Results go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wmset::cli
