// Command-line front end. `run` is what the executable's main calls; it is
// separate so that tests can drive the subcommands in-process.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spherequad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitError = 2;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace spherequad::cli
