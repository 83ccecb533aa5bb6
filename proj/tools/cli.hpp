// SPDX-License-Identifier: Apache-2.0
#ifndef ECASURVEY_CLI_HPP
#define ECASURVEY_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ecasurvey::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kEmptyResult = 3,
  kInfeasible = 4,
  kNumerical = 5,
};

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ecasurvey::cli

#endif  // ECASURVEY_CLI_HPP
