#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace signrange::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240521;
inline constexpr const char* kThreadsEnv = "SIGNRANGE_THREADS";

enum ExitCode : int { kOk = 0, kInvalid = 2, kFinding = 3 };

/// Runs one command line (without the program name). Artifacts go to --out files
/// or to `out`; diagnostics are single "error: kind=... message=..." lines on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace signrange::cli
