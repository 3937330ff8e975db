#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lattsite::cli {

// Runs one command given argv-style arguments (program name excluded).
// Returns the process exit code: 0 on success, 2 for usage errors, 3 for
// numerical-validity problems or warnings escalated by --strict.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lattsite::cli
