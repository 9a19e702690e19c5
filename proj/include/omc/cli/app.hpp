#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace omc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

// Parses arguments (without the program name), runs one subcommand and
// returns the process exit code. Diagnostics go to `err`; CSV goes to --out
// or, without it, to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace omc::cli
