#pragma once

#include <ostream>

namespace fraghmm {

// Full command-line driver, separated from main() so tests can run verbs
// in-process. Returns the process exit code: 0 on success, 1 on runtime
// errors (all printed to err as a single "error: ..." line), 2 on usage
// errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fraghmm
