#include <doctest.h>

#include <random>

#include "amity/arith.hpp"
#include "amity/errors.hpp"
#include "amity/sigma_sieve.hpp"
#include "oracles.hpp"

using namespace amity;

TEST_CASE("is_prime examples") {
  CHECK(is_prime(Natural(2)));
  CHECK(is_prime(Natural(331)));
  CHECK_FALSE(is_prime(Natural(488281)));
  CHECK_FALSE(is_prime(Natural(0)));
  CHECK_FALSE(is_prime(Natural(1)));
}

TEST_CASE("is_prime matches trial division below 10^5") {
  for (std::uint64_t n = 0; n < 100'000; ++n) {
    REQUIRE_MESSAGE(is_prime_u64(n) == oracle::is_prime(n), "n = " << n);
  }
}

TEST_CASE("is_prime on hard 64-bit inputs") {
  CHECK(is_prime(Natural("18446744073709551557")));  // largest prime below 2^64
  CHECK_FALSE(is_prime(Natural("3825123056546413051")));  // strong pseudoprime to bases 2..23
  CHECK_FALSE(is_prime(Natural("18446744073709551617")));  // 2^64 + 1 = 274177 * 67280421310721
  CHECK(is_prime(Natural("170141183460469231731687303715884105727")));  // 2^127 - 1
}

TEST_CASE("factorize examples") {
  CHECK(factorize(Natural(1)).is_one());
  CHECK(factorize(Natural(10)) == Factorization::from_pairs({{2, 1}, {5, 1}}));
  CHECK(factorize(Natural(488281)) == Factorization::from_pairs({{19, 1}, {31, 1}, {829, 1}}));
  CHECK_THROWS_AS(factorize(Natural(0)), DomainError);
}

TEST_CASE("factorize agrees with trial division and round-trips below 10^5") {
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    const auto f = factorize(n);
    REQUIRE(f.value() == Natural(from_u64(n)));
    const auto expected = oracle::trial_factor(n);
    REQUIRE(f.omega() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      REQUIRE(f.pairs()[i].prime == Natural(from_u64(expected[i].first)));
      REQUIRE(f.pairs()[i].exponent == expected[i].second);
    }
  }
}

TEST_CASE("factorize round-trips random 64-bit integers") {
  std::mt19937_64 rng(20241015);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t n = rng() | 1u;
    const auto f = factorize(n);
    REQUIRE(f.value() == from_u64(n));
    for (std::size_t k = 0; k < f.pairs().size(); ++k) {
      REQUIRE(is_prime(f.pairs()[k].prime));
      if (k) REQUIRE(f.pairs()[k - 1].prime < f.pairs()[k].prime);
    }
  }
}

TEST_CASE("factorize handles large cofactors beyond trial division") {
  // Two primes above the default trial bound.
  const Natural p("1000003"), q("1000033");
  CHECK(factorize(p * q) == Factorization::from_pairs({{p, 1}, {q, 1}}));
  CHECK(factorize(p * p * q) == Factorization::from_pairs({{p, 2}, {q, 1}}));
  // Past 64 bits: two 40-ish-bit primes and a 45-bit one.
  const Natural r("1099511627689"), s("2199023255531"), t("35184372088891");
  CHECK(factorize(r * s * t) == Factorization::from_pairs({{r, 1}, {s, 1}, {t, 1}}));
  CHECK(factorize(r * r * s) == Factorization::from_pairs({{r, 2}, {s, 1}}));
}

TEST_CASE("factorize reports budget exhaustion") {
  FactorizeOptions tight;
  tight.trial_bound = 10;
  tight.rho_iteration_budget = 4;
  const Natural semiprime = Natural("1000003") * Natural("1000033");
  CHECK_THROWS_AS(factorize(semiprime, tight), ResourceLimitError);
}

TEST_CASE("Factorization validates its invariants") {
  CHECK_THROWS_AS(Factorization::from_pairs({{4, 1}}), DomainError);
  CHECK_THROWS_AS(Factorization::from_pairs({{5, 1}, {3, 1}}), DomainError);
  CHECK_THROWS_AS(Factorization::from_pairs({{5, 1}, {5, 2}}), DomainError);
  CHECK_THROWS_AS(Factorization::from_pairs({{5, 0}}), DomainError);
  CHECK(Factorization().value() == 1);
  CHECK(Factorization().to_string() == "1");
  CHECK(factorize(Natural(360)).to_string() == "2^3*3^2*5^1");
}

TEST_CASE("sigma examples") {
  CHECK(sigma(factorize(Natural(1))) == 1);
  CHECK(sigma(factorize(Natural(25))) == 31);
  CHECK(sigma(factorize(Natural(10))) == 18);
}

TEST_CASE("sigma equals the divisor sum below 10^5") {
  const auto table = oracle::divisor_sum_table(100'001);
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    REQUIRE_MESSAGE(sigma(factorize(n)) == from_u64(table[n]), "n = " << n);
  }
}

TEST_CASE("sigma is multiplicative on coprime pairs up to 500") {
  std::vector<Natural> s(501);
  for (std::uint64_t n = 1; n <= 500; ++n) s[n] = sigma(factorize(n));
  for (std::uint64_t m = 1; m <= 500; ++m) {
    for (std::uint64_t n = m; n <= 500; ++n) {
      if (std::gcd(m, n) != 1) continue;
      REQUIRE(sigma(factorize(m * n)) == s[m] * s[n]);
    }
  }
}

TEST_CASE("sigma_prime_power matches direct summation") {
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 31ul, 331ul}) {
    for (unsigned long e = 0; e < 40; ++e) REQUIRE(sigma_prime_power(p, e) == oracle::geometric_sum(p, e));
  }
}

TEST_CASE("p_adic_valuation examples") {
  CHECK(p_adic_valuation(3, 30) == 1);
  CHECK(p_adic_valuation(19, 4) == 0);
  CHECK(p_adic_valuation(5, 1) == 0);
  CHECK(p_adic_valuation(2, Natural(1) << 100) == 100);
  CHECK_THROWS_AS(p_adic_valuation(3, 0), DomainError);
}

TEST_CASE("multiplicative_order examples") {
  CHECK(multiplicative_order(5, 31) == 3);
  CHECK(multiplicative_order(5, 19) == 9);
  CHECK(multiplicative_order(7, 9) == 3);
  CHECK_THROWS_AS(multiplicative_order(6, 9), DomainError);
  CHECK_THROWS_AS(multiplicative_order(5, 1), DomainError);
}

TEST_CASE("multiplicative_order matches stepping and divides phi") {
  for (std::uint64_t m = 2; m <= 300; ++m) {
    const std::uint64_t phi = oracle::phi(m);
    for (std::uint64_t q = 1; q <= 300; ++q) {
      if (std::gcd(q, m) != 1) continue;
      const Natural d = multiplicative_order(q, m);
      REQUIRE(d == oracle::order(q, m));
      REQUIRE(phi % d.get_ui() == 0);
    }
  }
}

TEST_CASE("crt examples") {
  CHECK(crt(ResidueSystem({{0, 45}, {3, 8}})) == Congruence{315, 360});
  CHECK(crt(ResidueSystem({{0, 1}})) == Congruence{0, 1});
  CHECK(crt(ResidueSystem({{0, 1125}, {1, 8}})) == Congruence{5625, 9000});
  const auto brute = oracle::crt({{0, 1125}, {1, 8}});
  CHECK(Congruence{brute.first, brute.second} == Congruence{5625, 9000});
}

TEST_CASE("crt rejects bad systems") {
  CHECK_THROWS_AS(ResidueSystem({{0, 6}, {1, 4}}), DomainError);
  CHECK_THROWS_AS(ResidueSystem({{5, 5}}), DomainError);
  CHECK_THROWS_AS(ResidueSystem({{0, 0}}), DomainError);
}

TEST_CASE("crt solutions satisfy every congruence") {
  std::mt19937 rng(7);
  const std::vector<std::uint64_t> moduli = {3, 4, 5, 7, 11, 13, 17, 19, 23};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Congruence> sys;
    for (auto m : moduli) {
      if (rng() % 2) sys.push_back({Natural(static_cast<unsigned long>(rng() % m)), Natural(static_cast<unsigned long>(m))});
    }
    const auto solved = crt(ResidueSystem(sys));
    Natural product = 1;
    for (const auto& c : sys) {
      REQUIRE(solved.residue % c.modulus == c.residue);
      product *= c.modulus;
    }
    REQUIRE(solved.modulus == product);
    REQUIRE(solved.residue < product);
  }
}

TEST_CASE("sigma sieve agrees with factorization on random points") {
  const std::uint64_t lo = 123'456'789, hi = lo + 50'000;
  const auto sieved = sigma_segment(lo, hi);
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t n = lo + rng() % (hi - lo);
    REQUIRE(from_u64(sieved[n - lo]) == sigma(factorize(n)));
  }
  CHECK_THROWS_AS(sigma_segment(0, 10), DomainError);
  CHECK_THROWS_AS(sigma_segment(5, 5), DomainError);
}

TEST_CASE("parse_natural accepts powers and separators") {
  CHECK(parse_natural("10^7") == 10'000'000);
  CHECK(parse_natural("1_000") == 1000);
  CHECK_THROWS_AS(parse_natural("-3"), DomainError);
  CHECK_THROWS_AS(parse_natural(""), DomainError);
  CHECK_THROWS_AS(parse_natural("2^"), DomainError);
}
