#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace amity {

/// Outcome of one invariant suite: how many individual checks ran and which
/// failed (the first few are kept verbatim).
struct SuiteResult {
  std::string name;
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> failure_samples;
  std::uint64_t elapsed_ms = 0;

  bool passed() const noexcept { return failures == 0; }
};

/// lemma21, prop22, thm31, mod8, bounds, residue.
const std::vector<std::string>& suite_names();

/// Runs a named suite, or every suite for "all". Throws DomainError for an
/// unknown name.
std::vector<SuiteResult> run_suite(std::string_view name);

}  // namespace amity
