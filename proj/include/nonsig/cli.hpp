#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nonsig {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,  // invalid behavior or malformed input file
    kExitAnalysis = 2,    // post-processing could not produce an answer
    kExitUsage = 64,      // unknown flag, bad argument value
    kExitInternal = 70,
};

/// Runs one subcommand (`args` excludes the program name).
int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

}  // namespace nonsig
