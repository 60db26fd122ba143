#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace grasspack {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point for the `grasspack` tool. `args` excludes the program name.
/// Subcommands: gen, eval, export, stats. Errors go to `err` as
/// "error[<Kind>]: <message>".
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace grasspack
