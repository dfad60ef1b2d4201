#pragma once

// Necessary conditions on a friend of 10, i.e. an integer F with
// sigma(F)/F = 9/5, each exposed as an independently testable filter over
// structured candidates F = 5^(2a) * Q^2 (Q odd, coprime to 15).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amity/abundancy.hpp"
#include "amity/arith.hpp"
#include "amity/exact_ratio.hpp"
#include "amity/natural.hpp"

namespace amity {

enum class Verdict { Pass, Reject, NotApplicable };

/// Chain order is the enum order.
enum class Rule {
  Structural,
  PrimeSupport,
  ExponentMod3,
  ExponentMod27,
  Mod8Congruence,
  NineExact,
  ResidueClassMembership,
  Eq1,
};

inline constexpr Rule kChainOrder[] = {
    Rule::Structural,    Rule::PrimeSupport, Rule::ExponentMod3,           Rule::ExponentMod27,
    Rule::Mod8Congruence, Rule::NineExact,    Rule::ResidueClassMembership, Rule::Eq1,
};

const char* to_string(Verdict v);
const char* rule_name(Rule r);

struct RuleOutcome {
  Rule rule;
  Verdict verdict;
  std::string detail;
};

/// F = 5^(2a) * Q^2 with every prime of Q at least 7. Index 1 of the
/// exponent and prime lists is always (a, 5).
class Candidate {
 public:
  /// Throws DomainError if a == 0 or Q has a prime factor below 7.
  Candidate(unsigned long a, Factorization q);

  unsigned long a() const noexcept { return a_; }
  const Factorization& q_factorization() const noexcept { return q_; }

  Natural q() const { return q_.value(); }
  Natural value() const;
  Factorization f_factorization() const;
  /// a_1 = a, then the exponents of Q.
  std::vector<unsigned long> exponents() const;
  /// p_1 = 5, then the primes of Q.
  std::vector<Natural> primes() const;
  std::size_t omega() const noexcept { return q_.omega() + 1; }
  /// Stable textual id, e.g. "a=1;Q=7^1*11^1".
  std::string id() const;

 private:
  unsigned long a_;
  Factorization q_;
};

struct FilterReport {
  std::string candidate_id;
  std::vector<RuleOutcome> outcomes;
  std::optional<Rule> rejected_by;

  bool survives() const noexcept { return !rejected_by.has_value(); }
  const RuleOutcome& outcome(Rule r) const;
};

struct ResidueClass {
  Natural modulus;
  Natural residue;

  bool contains(const Natural& n) const;
  bool operator==(const ResidueClass&) const = default;
};

/// p^(k-1) || (q - 1), and f = ord_{p^k}(q) when that order is odd.
struct OrderParams {
  Natural p;
  Natural q;
  unsigned long k = 1;
  std::optional<Natural> f;
};

// Structural shape: odd perfect square, 5 | n, 3 does not divide n,
// omega(n) >= 7. The detail names the first violated clause.
RuleOutcome structural_precheck(const Natural& n, const FactorizeOptions& options = {});
RuleOutcome structural_precheck(const Factorization& n);

/// sigma(5^(2a)) * sigma(Q^2) == 9 * 5^(2a-1) * Q^2, exactly.
bool eq1_check(const Candidate& c);

/// 9 divides sigma(F) and 27 does not; sigma(F) comes from the candidate's
/// factorization, F itself is never factored.
bool nine_exact_divisibility(const Candidate& c);

/// sigma(5^(2a)) mod 8, read off a mod 4. Requires a >= 1.
unsigned sigma5_mod8(unsigned long a);

OrderParams order_params(const Natural& p, const Natural& q);
std::optional<Natural> smallest_odd_f(const Natural& p, const Natural& q);
/// p | sigma(q^(2a)) decided through the order of q modulo p^k.
bool divides_sigma_even_power(const Natural& p, const Natural& q, unsigned long a);

RuleOutcome exponent_filter_mod3(std::span<const unsigned long> exponents);
RuleOutcome exponent_filter_mod3(const Candidate& c);
RuleOutcome exponent_filter_mod27(std::span<const unsigned long> exponents);
RuleOutcome exponent_filter_mod27(const Candidate& c);

/// Sum congruence from the residues alone. NotApplicable when the product
/// sigma(5^(2a)) * sigma(Q^2) is not 5 mod 8.
RuleOutcome congruence_sum_check(unsigned long a, unsigned sigma_q2_mod8);
RuleOutcome congruence_sum_check(const Candidate& c);

/// (25/81) * prod (2 a_i + 1)^2.
ExactRatio lower_bound(std::span<const unsigned long> exponents);
/// 625 * 9^(omega - 3). Throws DomainError for omega < 3.
Natural omega_lower_bound(unsigned long omega);
/// sigma(p^(2a)) > (2a + 1) * p^a, evaluated exactly.
bool am_gm_sigma_bound(const Natural& p, unsigned long a);

/// The class F must lie in for a friend with 5^(2a) || F, canonical least
/// residue. derive_residue_class(1) is 5425 mod 6200.
ResidueClass derive_residue_class(unsigned long a);

/// Reject iff prod p/(p-1) <= 9/5, since no exponent choice can then reach
/// 9/5. The list must contain 5.
RuleOutcome prime_support_filter(std::span<const Natural> primes);

RuleOutcome residue_class_filter(const Candidate& c);

/// Every rule in chain order; rules after the first Reject are recorded as
/// NotApplicable.
FilterReport filter_chain(const Candidate& c);

/// Parses "7^2,11^1,13" (exponent defaults to 1). Empty text is Q = 1.
Factorization parse_prime_powers(std::string_view text);

}  // namespace amity
