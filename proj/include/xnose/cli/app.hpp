#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xnose::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFatal = 2,        // I/O, config or schema error
  kExitSmellsFound = 3,  // --fail-on-smell and at least one finding
};

/// The whole command line, minus the program name. Artifacts go to `out`
/// (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xnose::cli
