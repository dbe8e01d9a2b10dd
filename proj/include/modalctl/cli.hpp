#pragma once

// Command dispatch for the modalctl tool.
//
//   modalctl <spectrum|minimality|check|attain> --model <path> [options]
//
// Exit codes: 0 pass, 2 criterion failed, 1 runtime or model error, 64 usage.

#include <ostream>
#include <string>
#include <vector>

namespace modalctl::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFail = 2;
inline constexpr int kExitUsage = 64;

/// args excludes the program name. The report goes to out (or --out), and
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modalctl::cli
