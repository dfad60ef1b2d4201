#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace amity {

/// Largest exclusive upper bound accepted by the sieve; keeps every sigma(n)
/// comfortably inside 64 bits.
inline constexpr std::uint64_t kSigmaSieveLimit = std::uint64_t{1} << 56;

/// Writes sigma(n) for n in [lo, hi) into out (size hi - lo). Each n is
/// divided down by the sieving primes up to sqrt(hi); what remains is 1 or a
/// single large prime. Requires 1 <= lo < hi <= kSigmaSieveLimit.
void sigma_segment(std::uint64_t lo, std::uint64_t hi, std::span<std::uint64_t> out,
                   std::vector<std::uint64_t>& scratch);

std::vector<std::uint64_t> sigma_segment(std::uint64_t lo, std::uint64_t hi);

}  // namespace amity
