#pragma once

#include <iosfwd>

namespace qdecay::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitIo = 3;

/// Entry point of the command-line tool. Diagnostics go to err.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdecay::cli
