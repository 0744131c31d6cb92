#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cvqkd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNoRate = 3;

// Entry point of the cvqkd-rates tool. `args` excludes the program name.
// Results go to `out` (or --out PATH), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvqkd::cli
