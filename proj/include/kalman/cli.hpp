#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kalman::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInternal = 3;

// Runs the command line `args` (without the program name). Results go to
// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kalman::cli
