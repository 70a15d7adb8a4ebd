#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace halolab::cli {

enum ExitCode : int { kOk = 0, kInvalidConfig = 2, kBudgetExceeded = 3, kInternalError = 4 };

struct Outcome {
  std::string summary;
  std::vector<std::string> files;
};

/// Writes `bytes` to a sibling temp file, then renames it over `path`.
void write_atomic(const std::string& path, const std::string& bytes);

/// Runs one validated experiment and writes its artifacts.
Outcome execute(const Config& config);

/// Command-line front door (arguments exclude the program name). Maps errors
/// to exit codes 2 (invalid config), 3 (budget) and 4 (internal, with a repro
/// bundle written next to the output).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace halolab::cli
