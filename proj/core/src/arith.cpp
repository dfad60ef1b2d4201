#include "amity/arith.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "amity/errors.hpp"

namespace amity {

// ---------------------------------------------------------------------------
// Prime table

const std::vector<std::uint32_t>& small_primes(std::uint32_t limit) {
  static std::mutex mu;
  static std::map<std::uint32_t, std::unique_ptr<const std::vector<std::uint32_t>>> tables;

  std::uint32_t key = std::max<std::uint32_t>(limit, 1u << 12);
  key = key >= (1u << 31) ? 0xffffffffu : std::bit_ceil(key);

  std::lock_guard lock(mu);
  if (auto it = tables.lower_bound(key); it != tables.end()) return *it->second;

  std::vector<bool> composite(static_cast<std::size_t>(key) + 1, false);
  auto primes = std::make_unique<std::vector<std::uint32_t>>();
  for (std::uint64_t i = 2; i <= key; ++i) {
    if (composite[i]) continue;
    primes->push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= key; j += i) composite[j] = true;
  }
  auto& slot = tables[key];
  slot = std::move(primes);
  return *slot;
}

// ---------------------------------------------------------------------------
// Factorization value type

Factorization Factorization::from_pairs(std::vector<PrimePower> pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& pp = pairs[i];
    if (pp.exponent == 0) {
      throw DomainError("factorization exponent must be >= 1 for prime " + amity::to_string(pp.prime));
    }
    if (!is_prime(pp.prime)) {
      throw DomainError("factorization entry is not prime: " + amity::to_string(pp.prime));
    }
    if (i > 0 && !(pairs[i - 1].prime < pp.prime)) {
      throw DomainError("factorization primes must be strictly increasing");
    }
  }
  return Factorization(std::move(pairs));
}

Factorization Factorization::from_sorted_unchecked(std::vector<PrimePower> pairs) {
  return Factorization(std::move(pairs));
}

Natural Factorization::value() const {
  Natural out = 1;
  for (const auto& [p, e] : pairs_) out *= amity::pow(p, e);
  return out;
}

Factorization Factorization::power(unsigned long k) const {
  if (k == 0) return {};
  auto pairs = pairs_;
  for (auto& pp : pairs) pp.exponent *= k;
  return Factorization(std::move(pairs));
}

std::vector<Natural> Factorization::primes() const {
  std::vector<Natural> out;
  out.reserve(pairs_.size());
  for (const auto& pp : pairs_) out.push_back(pp.prime);
  return out;
}

unsigned long Factorization::exponent_of(const Natural& prime) const {
  for (const auto& pp : pairs_) {
    if (pp.prime == prime) return pp.exponent;
  }
  return 0;
}

std::string Factorization::to_string() const {
  if (pairs_.empty()) return "1";
  std::ostringstream out;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (i) out << '*';
    out << amity::to_string(pairs_[i].prime) << '^' << pairs_[i].exponent;
  }
  return out.str();
}

Factorization operator*(const Factorization& a, const Factorization& b) {
  std::vector<PrimePower> merged;
  merged.reserve(a.pairs_.size() + b.pairs_.size());
  auto i = a.pairs_.begin();
  auto j = b.pairs_.begin();
  while (i != a.pairs_.end() || j != b.pairs_.end()) {
    if (j == b.pairs_.end() || (i != a.pairs_.end() && i->prime < j->prime)) {
      merged.push_back(*i++);
    } else if (i == a.pairs_.end() || j->prime < i->prime) {
      merged.push_back(*j++);
    } else {
      merged.push_back({i->prime, i->exponent + j->exponent});
      ++i;
      ++j;
    }
  }
  return Factorization(std::move(merged));
}

// ---------------------------------------------------------------------------
// Primality

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
  a %= n;
  if (a == 0) return false;
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::array<u64, 12> kSmall = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kSmall) {
    if (n % p == 0) return n == p;
  }
  if (n < 37 * 37) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic for every n < 2^64.
  static constexpr std::array<u64, 7> kBases = {2, 325, 9375, 28178, 450775, 9780504, 1795265022};
  for (u64 a : kBases) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

bool is_prime(const Natural& n, const PrimalityOptions& options) {
  if (sgn(n) <= 0) return false;
  if (fits_u64(n)) return is_prime_u64(to_u64(n));
  return mpz_probab_prime_p(n.get_mpz_t(), std::max(options.rounds, 1)) != 0;
}

// ---------------------------------------------------------------------------
// Factoring

namespace {

class RhoBudget {
 public:
  RhoBudget(std::uint64_t limit, const Natural& n) : remaining_(limit), n_(n) {}

  void charge(std::uint64_t iterations) {
    if (iterations > remaining_) {
      throw ResourceLimitError("factoring budget exceeded while factoring " + to_string(n_));
    }
    remaining_ -= iterations;
  }

 private:
  std::uint64_t remaining_;
  const Natural& n_;
};

// Brent's cycle-finding variant of Pollard rho with batched gcds. Returns a
// non-trivial factor of the odd composite n.
u64 brent_split_u64(u64 n, RhoBudget& budget) {
  constexpr u64 kBatch = 128;
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, ys = 2, q = 1, g = 1;
    auto f = [&](u64 v) {
      return static_cast<u64>((static_cast<u128>(v) * v + c) % n);
    };
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        u64 steps = std::min(kBatch, r - k);
        budget.charge(steps);
        for (u64 i = 0; i < steps; ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      if (r > (u64{1} << 40)) break;
    }
    if (g == n) {
      do {
        ys = f(ys);
        budget.charge(1);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
}

Natural brent_split(const Natural& n, RhoBudget& budget) {
  constexpr unsigned long kBatch = 128;
  if (mpz_even_p(n.get_mpz_t())) return 2;
  Natural x, y, ys, q, g, diff;
  for (unsigned long c = 1;; ++c) {
    y = 2;
    q = 1;
    g = 1;
    auto step = [&](Natural& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    for (unsigned long r = 1; g == 1; r <<= 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) step(y);
      for (unsigned long k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        unsigned long steps = std::min(kBatch, r - k);
        budget.charge(steps);
        for (unsigned long i = 0; i < steps; ++i) {
          step(y);
          diff = abs(x - y);
          q = q * diff % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
    }
    if (g == n) {
      do {
        step(ys);
        budget.charge(1);
        diff = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
}

// Returns (root, k) with root^k == n and k maximal, or k == 1.
std::pair<Natural, unsigned long> perfect_power_root(const Natural& n) {
  if (!mpz_perfect_power_p(n.get_mpz_t())) return {n, 1};
  const auto bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (unsigned long k = bits; k >= 2; --k) {
    Natural root;
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) return {root, k};
  }
  return {n, 1};
}

void split_cofactor(const Natural& composite, unsigned long multiplicity,
                    std::map<Natural, unsigned long>& out, RhoBudget& budget,
                    const PrimalityOptions& primality) {
  std::vector<std::pair<Natural, unsigned long>> work{{composite, multiplicity}};
  while (!work.empty()) {
    auto [m, mult] = std::move(work.back());
    work.pop_back();
    if (m == 1) continue;
    if (is_prime(m, primality)) {
      out[m] += mult;
      continue;
    }
    auto [root, k] = perfect_power_root(m);
    if (k > 1) {
      work.emplace_back(root, mult * k);
      continue;
    }
    Natural d = fits_u64(m) ? from_u64(brent_split_u64(to_u64(m), budget)) : brent_split(m, budget);
    work.emplace_back(m / d, mult);
    work.emplace_back(d, mult);
  }
}

Factorization from_map(const std::map<Natural, unsigned long>& counts) {
  std::vector<PrimePower> pairs;
  pairs.reserve(counts.size());
  for (const auto& [p, e] : counts) pairs.push_back({p, e});
  return Factorization::from_sorted_unchecked(std::move(pairs));
}

}  // namespace

Factorization factorize(std::uint64_t n, const FactorizeOptions& options) {
  if (n == 0) throw DomainError("factorize requires n >= 1");
  std::vector<PrimePower> pairs;
  u64 rem = n;
  const auto bound = static_cast<std::uint32_t>(std::min<std::uint64_t>(options.trial_bound, 0xffffffffu));
  const auto& primes = small_primes(bound);
  u64 last_tried = 1;
  for (std::uint32_t p : primes) {
    if (p > bound) break;
    if (static_cast<u128>(p) * p > rem) break;
    last_tried = p;
    if (rem % p != 0) continue;
    unsigned long e = 0;
    do {
      rem /= p;
      ++e;
    } while (rem % p == 0);
    pairs.push_back({from_u64(p), e});
  }
  if (rem == 1) return Factorization::from_sorted_unchecked(std::move(pairs));

  const u128 covered = static_cast<u128>(last_tried + 1) * (last_tried + 1);
  if (static_cast<u128>(rem) < covered || is_prime_u64(rem)) {
    pairs.push_back({from_u64(rem), 1});
    return Factorization::from_sorted_unchecked(std::move(pairs));
  }

  std::map<Natural, unsigned long> counts;
  for (auto& pp : pairs) counts[pp.prime] = pp.exponent;
  Natural whole = from_u64(n);
  RhoBudget budget(options.rho_iteration_budget, whole);
  split_cofactor(from_u64(rem), 1, counts, budget, options.primality);
  return from_map(counts);
}

Factorization factorize(const Natural& n, const FactorizeOptions& options) {
  if (sgn(n) <= 0) throw DomainError("factorize requires n >= 1");
  if (fits_u64(n)) return factorize(to_u64(n), options);

  std::map<Natural, unsigned long> counts;
  Natural rem = n;
  const auto bound = static_cast<std::uint32_t>(std::min<std::uint64_t>(options.trial_bound, 0xffffffffu));
  u64 last_tried = 1;
  for (std::uint32_t p : small_primes(bound)) {
    if (p > bound) break;
    if (fits_u64(rem) && static_cast<u128>(p) * p > to_u64(rem)) break;
    last_tried = p;
    if (!mpz_divisible_ui_p(rem.get_mpz_t(), p)) continue;
    unsigned long e = mpz_remove(rem.get_mpz_t(), rem.get_mpz_t(), Natural(p).get_mpz_t());
    counts[Natural(p)] = e;
  }
  if (rem != 1) {
    Natural covered = Natural(static_cast<unsigned long>(last_tried + 1));
    covered *= covered;
    if (rem < covered) {
      counts[rem] += 1;
    } else {
      RhoBudget budget(options.rho_iteration_budget, n);
      split_cofactor(rem, 1, counts, budget, options.primality);
    }
  }
  return from_map(counts);
}

// ---------------------------------------------------------------------------
// Divisor sums, valuations, orders

Natural sigma_prime_power(const Natural& p, unsigned long e) {
  return (amity::pow(p, e + 1) - 1) / (p - 1);
}

Natural sigma(const Factorization& f) {
  Natural out = 1;
  for (const auto& [p, e] : f.pairs()) out *= sigma_prime_power(p, e);
  return out;
}

unsigned long p_adic_valuation(const Natural& p, const Natural& n) {
  if (sgn(n) <= 0) throw DomainError("p_adic_valuation requires n >= 1");
  if (p < 2) throw DomainError("p_adic_valuation requires p >= 2");
  Natural rem = n;
  return mpz_remove(rem.get_mpz_t(), rem.get_mpz_t(), p.get_mpz_t());
}

Natural euler_phi(const Factorization& f) {
  Natural out = 1;
  for (const auto& [p, e] : f.pairs()) out *= (p - 1) * amity::pow(p, e - 1);
  return out;
}

Natural multiplicative_order(const Natural& q, const Natural& m) {
  if (m < 2) throw DomainError("multiplicative_order requires modulus >= 2");
  if (sgn(q) < 0) throw DomainError("multiplicative_order requires q >= 0");
  Natural g = gcd(q, m);
  if (g != 1) {
    throw DomainError("multiplicative_order requires gcd(q, m) = 1; gcd(" + to_string(q) + ", " +
                      to_string(m) + ") = " + to_string(g));
  }
  Natural order = euler_phi(factorize(m));
  const Factorization phi_factors = factorize(order);
  Natural power;
  for (const auto& [r, e] : phi_factors.pairs()) {
    for (unsigned long i = 0; i < e; ++i) {
      Natural candidate = order / r;
      mpz_powm(power.get_mpz_t(), q.get_mpz_t(), candidate.get_mpz_t(), m.get_mpz_t());
      if (power != 1) break;
      order = candidate;
    }
  }
  return order;
}

// ---------------------------------------------------------------------------
// CRT

ResidueSystem::ResidueSystem(std::vector<Congruence> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& c = entries_[i];
    if (c.modulus < 1) throw DomainError("residue system modulus must be >= 1");
    if (sgn(c.residue) < 0 || c.residue >= c.modulus) {
      throw DomainError("residue " + to_string(c.residue) + " is not reduced modulo " + to_string(c.modulus));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (gcd(entries_[j].modulus, c.modulus) != 1) {
        throw DomainError("residue system moduli " + to_string(entries_[j].modulus) + " and " +
                          to_string(c.modulus) + " are not coprime");
      }
    }
  }
}

Congruence crt(const ResidueSystem& system) {
  Congruence acc{0, 1};
  Natural inverse, delta;
  for (const auto& [r, m] : system.entries()) {
    if (m == 1) continue;
    // acc.residue + acc.modulus * t == r (mod m)
    Natural base = acc.modulus % m;
    if (mpz_invert(inverse.get_mpz_t(), base.get_mpz_t(), m.get_mpz_t()) == 0) {
      throw DomainError("residue system moduli are not coprime");
    }
    delta = r - acc.residue;
    mpz_mod(delta.get_mpz_t(), delta.get_mpz_t(), m.get_mpz_t());
    Natural t = delta * inverse % m;
    acc.residue += acc.modulus * t;
    acc.modulus *= m;
  }
  return acc;
}

}  // namespace amity
