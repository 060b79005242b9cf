#pragma once

#include <iosfwd>

namespace ljet {

// Exit codes: 0 ok, 1 a check failed, 2 invalid input, 3 degenerate verdict.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ljet
