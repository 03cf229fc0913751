#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phantom::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point of the phantomho tool; `args` excludes the program name.
/// Returns 0 on success, 1 on usage or configuration errors and 2 on runtime
/// or numeric errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phantom::cli
