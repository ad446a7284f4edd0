#pragma once

#include <iosfwd>

namespace srcalloc {

// Environment variable that, when set, is prepended to relative --out paths.
inline constexpr const char* kOutputDirEnv = "SRCALLOC_OUTPUT_DIR";

// Entry point behind the `srcalloc` executable. Returns the process exit
// status: 0 success, 1 input error, 2 constraint or degenerate data, 3 I/O.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace srcalloc
