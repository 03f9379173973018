#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ade {

/// Runs the command line (args without the program name), writing the
/// report to out. Returns 0 on definite verdicts and passing checks, 2 on
/// Undetermined, 1 on errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out);

}  // namespace ade
