#pragma once

#include <iosfwd>

namespace lsmdp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitResourceLimit = 3;

/// Entry point of the `lsmdp` tool. Subcommands: classify, gamma, value,
/// simulate, compare. Every run writes its outputs plus manifest.ini (a
/// config file that `--config` accepts to reproduce the run) and
/// manifest.json into the output directory.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lsmdp::cli
