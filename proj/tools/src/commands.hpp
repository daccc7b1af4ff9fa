#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hjg::cli {

enum ExitCode : int {
  Ok = 0,
  InputFailure = 2,
  SolverFailure = 3,
  MethodDisagreement = 4,
  StatisticalMismatch = 5,
  AsymptoticsViolation = 6,
};

/// Runs the command line (args excludes the program name). Data goes to the
/// files named by the options or to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest text with 17 significant digits, `.` as decimal separator.
std::string format_number(double x);

}  // namespace hjg::cli
