#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "amity/natural.hpp"

namespace amity {

struct PrimePower {
  Natural prime;
  unsigned long exponent = 0;

  bool operator==(const PrimePower&) const = default;
};

/// A positive integer as (prime, exponent) pairs, strictly increasing by
/// prime. The empty factorization is 1.
class Factorization {
 public:
  Factorization() = default;

  /// Validates every invariant (primality, ordering, exponents >= 1).
  /// Throws DomainError on violation.
  static Factorization from_pairs(std::vector<PrimePower> pairs);

  /// Trusted constructor for callers that already hold a valid list.
  static Factorization from_sorted_unchecked(std::vector<PrimePower> pairs);

  const std::vector<PrimePower>& pairs() const noexcept { return pairs_; }
  std::size_t omega() const noexcept { return pairs_.size(); }
  bool is_one() const noexcept { return pairs_.empty(); }

  Natural value() const;
  /// Every exponent multiplied by k.
  Factorization power(unsigned long k) const;
  std::vector<Natural> primes() const;
  unsigned long exponent_of(const Natural& prime) const;

  /// "2^1*5^1", or "1" for the empty list.
  std::string to_string() const;

  friend Factorization operator*(const Factorization& a, const Factorization& b);
  bool operator==(const Factorization&) const = default;

 private:
  explicit Factorization(std::vector<PrimePower> pairs) : pairs_(std::move(pairs)) {}
  std::vector<PrimePower> pairs_;
};

struct PrimalityOptions {
  /// Miller-Rabin rounds used above 2^64; error probability <= 4^-rounds.
  int rounds = 40;
};

bool is_prime(const Natural& n, const PrimalityOptions& options = {});
bool is_prime_u64(std::uint64_t n);

struct FactorizeOptions {
  std::uint64_t trial_bound = 1'000'000;
  /// Total Pollard-Brent iterations allowed across all split attempts.
  std::uint64_t rho_iteration_budget = std::uint64_t{1} << 26;
  PrimalityOptions primality;
};

/// Throws ResourceLimitError when the rho budget runs out.
Factorization factorize(const Natural& n, const FactorizeOptions& options = {});
Factorization factorize(std::uint64_t n, const FactorizeOptions& options = {});

/// Sum of divisors, evaluated as the product of geometric sums.
Natural sigma(const Factorization& f);
/// 1 + p + ... + p^e.
Natural sigma_prime_power(const Natural& p, unsigned long e);

/// Largest e with p^e | n. Requires n >= 1, p >= 2.
unsigned long p_adic_valuation(const Natural& p, const Natural& n);

/// Smallest d >= 1 with q^d == 1 (mod m). Requires m >= 2 and gcd(q, m) = 1.
Natural multiplicative_order(const Natural& q, const Natural& m);

Natural euler_phi(const Factorization& f);

struct Congruence {
  Natural residue;
  Natural modulus;

  bool operator==(const Congruence&) const = default;
};

/// Congruences with residue < modulus and pairwise-coprime moduli.
class ResidueSystem {
 public:
  /// Throws DomainError if an entry has residue >= modulus, a zero modulus,
  /// or two moduli share a factor.
  explicit ResidueSystem(std::vector<Congruence> entries);

  const std::vector<Congruence>& entries() const noexcept { return entries_; }

 private:
  std::vector<Congruence> entries_;
};

/// The unique residue modulo the product of the moduli.
Congruence crt(const ResidueSystem& system);

/// Sorted primes covering at least [2, limit], from a process-wide table that
/// is never mutated once published. May extend past limit.
const std::vector<std::uint32_t>& small_primes(std::uint32_t limit);

}  // namespace amity
