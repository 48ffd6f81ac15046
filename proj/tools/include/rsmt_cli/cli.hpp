#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsmt::cli {

/// Runs the command line `args` (without the program name). Data goes to
/// `out`, diagnostics to `err`. Returns the process exit status.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace rsmt::cli
