#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aevplan {

// Runs one command line (args excludes the program name). Returns the process
// exit code: 0 success, 1 infeasible or unsolved, 2 input error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aevplan
