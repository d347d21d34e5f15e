#pragma once

// Command-line entry point. Exit codes: 0 success, 1 usage error, 2 data or
// computation error. All output is deterministic for identical inputs.

#include <iosfwd>
#include <string>
#include <vector>

namespace scalekit {

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, const char* const* argv);

} // namespace scalekit
