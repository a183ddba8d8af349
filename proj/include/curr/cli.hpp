#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curr {

/// Runs one CLI invocation. Exit codes: 0 success, 1 a check ran and failed
/// (a machine-readable verdict is still written), 2 input or geometry errors.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace curr
