#pragma once

#include <ostream>

namespace attachnet {

// Entry point of the command-line tool. Returns the process exit code:
// 0 success, 1 I/O or runtime failure, 2 invalid usage or input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace attachnet
