#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace riesz::cli {

enum ExitCode : int {
  kOk = 0,
  kTestFailed = 1,
  kNotInXi = 2,
  kBadTilt = 3,
  kUsage = 64,
};

/// Runs one command. args excludes the program name. Machine-readable output
/// goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1,0.5,2" or "[1, 0.5, 2]".
std::vector<double> parse_list(const std::string& text);

}  // namespace riesz::cli
