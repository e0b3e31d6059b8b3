#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wbisim::cli {

enum ExitCode : int {
    kSuccess = 0,
    kNotBisimilar = 1,
    kValidationError = 2,
    kParseError = 3,
    kSolverFailure = 4,
};

// Runs the command line (args excludes the program name). Documents are read
// from the named file, or stdin for "-".
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace wbisim::cli
