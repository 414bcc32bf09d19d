#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace choqroof {

/// Parses and runs one command line (without the program name). Reports go
/// to `out`, diagnostics to `err`. Returns the process exit code: 0 success,
/// 1 order not-dominates, 2 malformed input, 3 ambiguous or unsupported.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace choqroof
