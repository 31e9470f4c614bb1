#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace scm::cli {

// Dispatches one command line (without the program name).  Returns the
// process exit code: 0 success, 1 infeasible / no solution / condition not
// met, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace scm::cli
