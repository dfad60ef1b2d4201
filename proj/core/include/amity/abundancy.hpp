#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "amity/arith.hpp"
#include "amity/exact_ratio.hpp"
#include "amity/natural.hpp"

namespace amity {

/// sigma(n)/n in lowest terms, built as the product over prime powers of
/// (p^(a+1) - 1) / (p^a (p - 1)). The empty factorization gives 1/1.
ExactRatio abundancy_index(const Factorization& f);
ExactRatio abundancy_index(const Natural& n, const FactorizeOptions& options = {});

/// prod p/(p - 1) over a non-empty list of distinct primes: a strict upper
/// bound on the index of any integer with exactly that prime support.
ExactRatio index_upper_bound(std::span<const Natural> primes);

struct FriendPair {
  Natural smaller;
  Natural larger;
  ExactRatio shared_index;
};

/// True iff m != n and both have the same abundancy index.
bool are_friends(const Natural& m, const Natural& n, const FactorizeOptions& options = {});
std::optional<FriendPair> friend_pair(const Natural& m, const Natural& n,
                                      const FactorizeOptions& options = {});

/// Tests sigma(n) * den == num * n for 64-bit n and sigma(n) without
/// allocating. A target whose reduced terms do not fit in 64 bits matches no
/// 64-bit n: den must divide n, and num <= sigma(n).
class IndexMatcher {
 public:
  explicit IndexMatcher(const ExactRatio& target);

  bool matches(std::uint64_t n, std::uint64_t sigma_n) const {
    if (!representable_) return false;
    return static_cast<unsigned __int128>(sigma_n) * den_ == static_cast<unsigned __int128>(num_) * n;
  }

 private:
  bool representable_ = false;
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

struct FindFriendsOptions {
  unsigned workers = 1;
  std::uint64_t segment_size = std::uint64_t{1} << 20;
  /// Bounds up to this use the batched sigma sieve; above it each m is
  /// factored individually.
  std::uint64_t sieve_threshold = 100'000'000;
  FactorizeOptions factorize;
};

/// Every m <= bound, m != n, with the same index as n, ascending.
std::vector<Natural> find_friends(const Natural& n, const Natural& bound,
                                  const FindFriendsOptions& options = {});

enum class SolitaryVerdict { CertifiedSolitary, Inconclusive };

/// CertifiedSolitary iff gcd(n, sigma(n)) = 1. Never claims "friendly".
SolitaryVerdict solitary_certificate(const Natural& n, const FactorizeOptions& options = {});

const char* to_string(SolitaryVerdict v);

}  // namespace amity
