#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qsb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Runs one command. args excludes the program name. Reports go to `out`
// (or the --out file), usage text and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace qsb::cli
