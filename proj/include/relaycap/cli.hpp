#pragma once

#include <iosfwd>

namespace relaycap {

/// Entry point of the relaycap command-line tool. Returns the process exit
/// code: 0 on success, 2 on bad input, 1 on an internal failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace relaycap
