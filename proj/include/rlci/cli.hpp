#pragma once

// Command-line front end: build, query and gen.
//
// Exit codes: 0 success, 1 usage, 2 I/O, 3 index format.

#include <iosfwd>

namespace rlci::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_io = 2;
inline constexpr int exit_format = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rlci::cli
