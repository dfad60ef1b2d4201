#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace amity::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

/// Environment variables named kEnvPrefix + FLAG (e.g. AMITY_BOUND) supply
/// any flag not given on the command line.
inline constexpr const char* kEnvPrefix = "AMITY_";

/// Runs one command line (args excludes the program name). Returns the
/// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amity::cli
