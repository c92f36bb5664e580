#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdbf::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 2,
    kIllPosed = 3,
    kNumericalFailure = 4,
};

/// Runs the command line (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Inserts "--key value" pairs from a JSON config object for every key not
/// already given on the command line. Throws DomainError on unreadable files.
std::vector<std::string> merge_config(const std::vector<std::string>& args);

}  // namespace sdbf::cli
