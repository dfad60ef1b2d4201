#include "amity/sigma_sieve.hpp"

#include <cmath>
#include <string>

#include "amity/arith.hpp"
#include "amity/errors.hpp"

namespace amity {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

void sigma_segment(std::uint64_t lo, std::uint64_t hi, std::span<std::uint64_t> out,
                   std::vector<std::uint64_t>& scratch) {
  if (lo < 1 || lo >= hi) {
    throw DomainError("sigma_segment requires 1 <= lo < hi, got [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + ")");
  }
  if (hi > kSigmaSieveLimit) throw DomainError("sigma_segment upper bound exceeds 2^56");
  const std::size_t len = hi - lo;
  if (out.size() != len) throw DomainError("sigma_segment output span has the wrong length");

  scratch.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    scratch[i] = lo + i;
    out[i] = 1;
  }

  const std::uint64_t root = isqrt(hi - 1);
  for (std::uint32_t p32 : small_primes(static_cast<std::uint32_t>(root))) {
    const std::uint64_t p = p32;
    if (p > root) break;
    std::uint64_t start = (lo + p - 1) / p * p;
    for (std::uint64_t m = start; m < hi; m += p) {
      const std::size_t i = m - lo;
      std::uint64_t rem = scratch[i];
      std::uint64_t power = 1;
      std::uint64_t term = 1;
      do {
        rem /= p;
        power *= p;
        term += power;
      } while (rem % p == 0);
      scratch[i] = rem;
      out[i] *= term;
    }
  }
  for (std::size_t i = 0; i < len; ++i) {
    if (scratch[i] > 1) out[i] *= scratch[i] + 1;
  }
}

std::vector<std::uint64_t> sigma_segment(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 1 || lo >= hi) {
    throw DomainError("sigma_segment requires 1 <= lo < hi, got [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + ")");
  }
  std::vector<std::uint64_t> out(hi - lo);
  std::vector<std::uint64_t> scratch;
  sigma_segment(lo, hi, out, scratch);
  return out;
}

}  // namespace amity
