#include "amity/friend10.hpp"

#include <algorithm>
#include <sstream>

#include "amity/errors.hpp"

namespace amity {

namespace {

const ExactRatio& nine_fifths() {
  static const ExactRatio r(9, 5);
  return r;
}

std::string join(std::span<const unsigned long> values) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
  out << ')';
  return out.str();
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "Pass";
    case Verdict::Reject:
      return "Reject";
    case Verdict::NotApplicable:
      return "NotApplicable";
  }
  return "?";
}

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Structural:
      return "structural";
    case Rule::PrimeSupport:
      return "prime_support";
    case Rule::ExponentMod3:
      return "exponent_mod3";
    case Rule::ExponentMod27:
      return "exponent_mod27";
    case Rule::Mod8Congruence:
      return "mod8_congruence";
    case Rule::NineExact:
      return "nine_exact";
    case Rule::ResidueClassMembership:
      return "residue_class";
    case Rule::Eq1:
      return "eq1";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Candidate

Candidate::Candidate(unsigned long a, Factorization q) : a_(a), q_(std::move(q)) {
  if (a_ == 0) throw DomainError("candidate exponent a must be >= 1");
  for (const auto& [p, e] : q_.pairs()) {
    if (p < 7) throw DomainError("Q must be odd and coprime to 15; found prime " + to_string(p));
  }
}

Natural Candidate::value() const {
  Natural q = q_.value();
  return amity::pow(Natural(5), 2 * a_) * q * q;
}

Factorization Candidate::f_factorization() const {
  return Factorization::from_sorted_unchecked({{Natural(5), 2 * a_}}) * q_.power(2);
}

std::vector<unsigned long> Candidate::exponents() const {
  std::vector<unsigned long> out{a_};
  for (const auto& pp : q_.pairs()) out.push_back(pp.exponent);
  return out;
}

std::vector<Natural> Candidate::primes() const {
  std::vector<Natural> out{Natural(5)};
  for (const auto& pp : q_.pairs()) out.push_back(pp.prime);
  return out;
}

std::string Candidate::id() const { return "a=" + std::to_string(a_) + ";Q=" + q_.to_string(); }

const RuleOutcome& FilterReport::outcome(Rule r) const {
  for (const auto& o : outcomes) {
    if (o.rule == r) return o;
  }
  throw DomainError(std::string("report has no outcome for rule ") + rule_name(r));
}

bool ResidueClass::contains(const Natural& n) const {
  Natural r = n % modulus;
  return r == residue;
}

// ---------------------------------------------------------------------------
// Structural shape

RuleOutcome structural_precheck(const Factorization& n) {
  auto reject = [](std::string why) { return RuleOutcome{Rule::Structural, Verdict::Reject, std::move(why)}; };
  if (n.exponent_of(2) > 0) return reject("not odd");
  for (const auto& [p, e] : n.pairs()) {
    if (e % 2 != 0) return reject("not a perfect square (" + to_string(p) + "^" + std::to_string(e) + ")");
  }
  if (n.exponent_of(5) == 0) return reject("5 does not divide n");
  if (n.exponent_of(3) > 0) return reject("3 divides n");
  if (n.omega() < 7) return reject("omega(n) = " + std::to_string(n.omega()) + " < 7");
  return {Rule::Structural, Verdict::Pass, "odd square, 5 | n, 3 !| n, omega(n) = " + std::to_string(n.omega())};
}

RuleOutcome structural_precheck(const Natural& n, const FactorizeOptions& options) {
  if (n < 1) throw DomainError("structural_precheck requires n >= 1");
  return structural_precheck(factorize(n, options));
}

// ---------------------------------------------------------------------------
// Exact identities

bool eq1_check(const Candidate& c) {
  const Natural q = c.q();
  const Natural lhs = sigma_prime_power(5, 2 * c.a()) * sigma(c.q_factorization().power(2));
  const Natural rhs = 9 * amity::pow(Natural(5), 2 * c.a() - 1) * q * q;
  return lhs == rhs;
}

bool nine_exact_divisibility(const Candidate& c) {
  const Natural three = 3;
  unsigned long v3 = p_adic_valuation(three, sigma_prime_power(5, 2 * c.a()));
  for (const auto& [p, e] : c.q_factorization().pairs()) {
    v3 += p_adic_valuation(three, sigma_prime_power(p, 2 * e));
    if (v3 > 2) return false;
  }
  return v3 == 2;
}

unsigned sigma5_mod8(unsigned long a) {
  if (a == 0) throw DomainError("sigma5_mod8 requires a >= 1");
  static constexpr unsigned kByResidue[4] = {1, 7, 5, 3};
  return kByResidue[a % 4];
}

// ---------------------------------------------------------------------------
// Orders and divisibility of sigma(q^(2a))

OrderParams order_params(const Natural& p, const Natural& q) {
  if (!is_prime(p) || !is_prime(q)) throw DomainError("order_params requires primes p and q");
  if (p == q) throw DomainError("order_params requires p != q");
  OrderParams out{p, q, p_adic_valuation(p, q - 1) + 1, std::nullopt};
  // k is chosen so that q != 1 (mod p^k), hence the order is never 1.
  const Natural d = multiplicative_order(q, amity::pow(p, out.k));
  if (d % 2 == 1 && d > 1) out.f = d;
  return out;
}

std::optional<Natural> smallest_odd_f(const Natural& p, const Natural& q) { return order_params(p, q).f; }

bool divides_sigma_even_power(const Natural& p, const Natural& q, unsigned long a) {
  if (a == 0) throw DomainError("divides_sigma_even_power requires a >= 1");
  const auto f = smallest_odd_f(p, q);
  if (!f) return false;
  return Natural(2 * a + 1) % *f == 0;
}

// ---------------------------------------------------------------------------
// Exponent patterns

namespace {

RuleOutcome all_congruent_filter(Rule rule, std::span<const unsigned long> exponents, unsigned long residue,
                                 unsigned long modulus) {
  if (exponents.empty()) throw DomainError("exponent filter requires a non-empty exponent list");
  const bool all = std::all_of(exponents.begin(), exponents.end(),
                               [&](unsigned long e) { return e % modulus == residue; });
  std::string tail = std::to_string(residue) + " (mod " + std::to_string(modulus) + ")";
  if (all) return {rule, Verdict::Reject, "all a_i = " + tail + " in " + join(exponents)};
  return {rule, Verdict::Pass, "not all a_i = " + tail};
}

}  // namespace

RuleOutcome exponent_filter_mod3(std::span<const unsigned long> exponents) {
  return all_congruent_filter(Rule::ExponentMod3, exponents, 1, 3);
}

RuleOutcome exponent_filter_mod3(const Candidate& c) { return exponent_filter_mod3(c.exponents()); }

RuleOutcome exponent_filter_mod27(std::span<const unsigned long> exponents) {
  return all_congruent_filter(Rule::ExponentMod27, exponents, 13, 27);
}

RuleOutcome exponent_filter_mod27(const Candidate& c) { return exponent_filter_mod27(c.exponents()); }

// ---------------------------------------------------------------------------
// Mod-8 sum congruence

RuleOutcome congruence_sum_check(unsigned long a, unsigned sigma_q2_mod8) {
  if (sigma_q2_mod8 >= 8) throw DomainError("congruence_sum_check expects a residue modulo 8");
  const unsigned s5 = sigma5_mod8(a);
  const unsigned product = s5 * sigma_q2_mod8 % 8;
  const unsigned sum = (s5 + sigma_q2_mod8) % 8;
  std::string residues = "sigma(5^2a) = " + std::to_string(s5) + ", sigma(Q^2) = " + std::to_string(sigma_q2_mod8) +
                         " (mod 8)";
  if (product != 5) {
    return {Rule::Mod8Congruence, Verdict::NotApplicable, "product = " + std::to_string(product) + " != 5; " + residues};
  }
  const unsigned expected = a % 2 == 0 ? 6 : 2;
  std::string detail = "sum = " + std::to_string(sum) + ", expected " + std::to_string(expected) + " for " +
                       (a % 2 == 0 ? "even" : "odd") + " a";
  return {Rule::Mod8Congruence, sum == expected ? Verdict::Pass : Verdict::Reject, detail};
}

RuleOutcome congruence_sum_check(const Candidate& c) {
  Natural s = sigma(c.q_factorization().power(2)) % 8;
  return congruence_sum_check(c.a(), static_cast<unsigned>(s.get_ui()));
}

// ---------------------------------------------------------------------------
// Size bounds

ExactRatio lower_bound(std::span<const unsigned long> exponents) {
  if (exponents.empty()) throw DomainError("lower_bound requires a non-empty exponent list");
  Natural product = 1;
  for (unsigned long e : exponents) {
    if (e == 0) throw DomainError("lower_bound exponents must be >= 1");
    Natural t = 2 * Natural(e) + 1;
    product *= t * t;
  }
  return ExactRatio(25, 81) * ExactRatio::whole(product);
}

Natural omega_lower_bound(unsigned long omega) {
  if (omega < 3) throw DomainError("omega_lower_bound requires omega >= 3");
  return 625 * amity::pow(Natural(9), omega - 3);
}

bool am_gm_sigma_bound(const Natural& p, unsigned long a) {
  if (a == 0) throw DomainError("am_gm_sigma_bound requires a >= 1");
  if (!is_prime(p)) throw DomainError("am_gm_sigma_bound requires a prime, got " + to_string(p));
  return sigma_prime_power(p, 2 * a) > Natural(2 * a + 1) * amity::pow(p, a);
}

// ---------------------------------------------------------------------------
// Residue class of F

ResidueClass derive_residue_class(unsigned long a) {
  if (a == 0) throw DomainError("derive_residue_class requires a >= 1");
  const Natural five_2a = amity::pow(Natural(5), 2 * a);
  const Natural s5 = sigma_prime_power(5, 2 * a);
  if (gcd(s5, Natural(45)) != 1) {
    throw InternalConsistencyError("gcd(sigma(5^2a), 45) != 1 for a = " + std::to_string(a));
  }
  // sigma(Q^2) is a multiple of 9 * 5^(2a-1) since sigma(5^2a) is prime to 45.
  const Natural divisor = 9 * five_2a / 5;

  // The sum congruence fixes sigma(Q^2) mod 8.
  const unsigned s5_mod8 = sigma5_mod8(a);
  const unsigned sum_mod8 = a % 2 == 0 ? 6 : 2;
  const unsigned sq_mod8 = (sum_mod8 + 8 - s5_mod8) % 8;
  if (s5_mod8 * sq_mod8 % 8 != 5) {
    throw InternalConsistencyError("mod-8 shadow fails for a = " + std::to_string(a));
  }

  const Congruence sq = crt(ResidueSystem({{0, divisor}, {sq_mod8, 8}}));
  // sigma(Q^2) = sq.residue + 8 * divisor * t, and Q^2 = s5 * sigma(Q^2) / divisor.
  const Natural k0 = sq.residue / divisor;
  return ResidueClass{8 * s5 * five_2a, five_2a * s5 * k0};
}

RuleOutcome residue_class_filter(const Candidate& c) {
  const ResidueClass cls = derive_residue_class(c.a());
  std::string detail = "F mod " + to_string(cls.modulus) + " must be " + to_string(cls.residue);
  return {Rule::ResidueClassMembership, cls.contains(c.value()) ? Verdict::Pass : Verdict::Reject, detail};
}

// ---------------------------------------------------------------------------
// Prime support

RuleOutcome prime_support_filter(std::span<const Natural> primes) {
  if (std::find(primes.begin(), primes.end(), Natural(5)) == primes.end()) {
    throw DomainError("prime_support_filter requires 5 in the prime support");
  }
  const ExactRatio bound = index_upper_bound(primes);
  if (bound <= nine_fifths()) {
    return {Rule::PrimeSupport, Verdict::Reject, "prod p/(p-1) = " + bound.to_string() + " <= 9/5"};
  }
  return {Rule::PrimeSupport, Verdict::Pass, "prod p/(p-1) = " + bound.to_string() + " > 9/5"};
}

// ---------------------------------------------------------------------------
// Chain

FilterReport filter_chain(const Candidate& c) {
  FilterReport report{c.id(), {}, std::nullopt};
  report.outcomes.reserve(std::size(kChainOrder));
  for (Rule rule : kChainOrder) {
    if (report.rejected_by) {
      report.outcomes.push_back({rule, Verdict::NotApplicable, "skipped after rejection"});
      continue;
    }
    RuleOutcome outcome;
    switch (rule) {
      case Rule::Structural:
        outcome = structural_precheck(c.f_factorization());
        break;
      case Rule::PrimeSupport: {
        const auto primes = c.primes();
        outcome = prime_support_filter(primes);
        break;
      }
      case Rule::ExponentMod3:
        outcome = exponent_filter_mod3(c);
        break;
      case Rule::ExponentMod27:
        outcome = exponent_filter_mod27(c);
        break;
      case Rule::Mod8Congruence:
        outcome = congruence_sum_check(c);
        break;
      case Rule::NineExact: {
        const bool ok = nine_exact_divisibility(c);
        outcome = {rule, ok ? Verdict::Pass : Verdict::Reject, ok ? "9 || sigma(F)" : "9 does not exactly divide sigma(F)"};
        break;
      }
      case Rule::ResidueClassMembership:
        outcome = residue_class_filter(c);
        break;
      case Rule::Eq1: {
        const bool ok = eq1_check(c);
        outcome = {rule, ok ? Verdict::Pass : Verdict::Reject, ok ? "sigma(F)/F = 9/5" : "sigma(F)/F != 9/5"};
        break;
      }
    }
    if (outcome.verdict == Verdict::Reject) report.rejected_by = rule;
    report.outcomes.push_back(std::move(outcome));
  }
  return report;
}

// ---------------------------------------------------------------------------

Factorization parse_prime_powers(std::string_view text) {
  std::vector<PrimePower> pairs;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) throw DomainError("empty entry in prime-power list '" + std::string(text) + "'");
    const auto caret = item.find('^');
    Natural prime = parse_natural(item.substr(0, caret));
    unsigned long exponent = 1;
    if (caret != std::string_view::npos) {
      Natural e = parse_natural(item.substr(caret + 1));
      if (!e.fits_ulong_p()) throw DomainError("exponent too large in '" + std::string(item) + "'");
      exponent = e.get_ui();
    }
    pairs.push_back({std::move(prime), exponent});
    start = comma + 1;
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return x.prime < y.prime; });
  return Factorization::from_pairs(std::move(pairs));
}

}  // namespace amity
