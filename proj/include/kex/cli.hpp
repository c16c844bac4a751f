#pragma once

#include <iosfwd>

namespace kex {

// Exit codes: 0 feasible / check passed, 1 infeasible / check failed,
// 2 input error, 3 precondition or capacity error, 4 internal error.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace kex
