#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace consensus::cli {

// Run one CLI invocation. args excludes the program name. Returns the exit
// status: 0 success, 1 computation error, 2 configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace consensus::cli
