#include <doctest.h>

#include <numeric>

#include "amity/abundancy.hpp"
#include "amity/errors.hpp"
#include "oracles.hpp"

using namespace amity;

namespace {

ExactRatio ratio(unsigned long p, unsigned long q) { return ExactRatio(Natural(p), Natural(q)); }

ExactRatio brute_index(std::uint64_t n) { return ExactRatio(from_u64(oracle::divisor_sum(n)), from_u64(n)); }

std::vector<Natural> naturals(std::initializer_list<unsigned long> xs) {
  std::vector<Natural> out;
  for (auto x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("ExactRatio keeps lowest terms") {
  CHECK(ratio(72, 30) == ratio(12, 5));
  CHECK(ratio(72, 30).numerator() == 12);
  CHECK(ratio(6, 2).to_string() == "3/1");
  CHECK(ExactRatio::parse("9/5") == ratio(9, 5));
  CHECK(ExactRatio::parse("4") == ratio(4, 1));
  CHECK(ratio(9, 5) > ratio(7, 4));
  CHECK_THROWS_AS(ExactRatio(Natural(1), Natural(0)), DomainError);
  CHECK_THROWS_AS(ExactRatio::parse("1/0"), DomainError);
  CHECK_THROWS_AS(ExactRatio::parse("x/2"), DomainError);
}

TEST_CASE("abundancy_index examples") {
  CHECK(abundancy_index(factorize(Natural(10))) == ratio(9, 5));
  CHECK(abundancy_index(factorize(Natural(1))) == ratio(1, 1));
  CHECK(abundancy_index(factorize(Natural(30))) == ratio(12, 5));
  CHECK(abundancy_index(Natural(28)) == ratio(2, 1));
}

TEST_CASE("abundancy_index equals brute-force sigma(n)/n below 2*10^4") {
  for (std::uint64_t n = 1; n <= 20'000; ++n) REQUIRE(abundancy_index(factorize(n)) == brute_index(n));
}

TEST_CASE("index_upper_bound examples") {
  CHECK(index_upper_bound(naturals({5})) == ratio(5, 4));
  CHECK(index_upper_bound(naturals({5, 7})) == ratio(35, 24));
  CHECK(index_upper_bound(naturals({2, 3})) == ratio(3, 1));
  CHECK_THROWS_AS(index_upper_bound(naturals({})), DomainError);
  CHECK_THROWS_AS(index_upper_bound(naturals({5, 5})), DomainError);
  CHECK_THROWS_AS(index_upper_bound(naturals({4})), DomainError);
}

TEST_CASE("index is weakly multiplicative on coprime pairs") {
  std::vector<ExactRatio> idx(301);
  for (std::uint64_t n = 1; n <= 300; ++n) idx[n] = abundancy_index(factorize(n));
  for (std::uint64_t m = 1; m <= 300; ++m) {
    for (std::uint64_t n = 1; n <= 300; ++n) {
      if (std::gcd(m, n) != 1) continue;
      REQUIRE(abundancy_index(factorize(m * n)) == idx[m] * idx[n]);
    }
  }
}

TEST_CASE("index grows under proper multiples") {
  for (std::uint64_t n = 1; n <= 1000; ++n) {
    const auto base = abundancy_index(factorize(n));
    for (std::uint64_t alpha = 2; alpha <= 10; ++alpha) REQUIRE(abundancy_index(factorize(alpha * n)) > base);
  }
}

TEST_CASE("replacing primes by larger ones does not raise the index") {
  const auto primes = oracle::primes_below(50);
  auto index_of = [](const std::vector<std::uint64_t>& ps, const std::vector<unsigned long>& es) {
    std::vector<std::pair<std::uint64_t, unsigned long>> pairs;
    for (std::size_t i = 0; i < ps.size(); ++i) pairs.emplace_back(ps[i], es[i]);
    std::sort(pairs.begin(), pairs.end());
    std::vector<PrimePower> pp;
    for (auto [p, e] : pairs) pp.push_back({from_u64(p), e});
    return abundancy_index(Factorization::from_pairs(pp));
  };
  // Two factors exhaustively; the library suite covers three.
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (std::size_t j = i + 1; j < primes.size(); ++j) {
      for (std::size_t k = i; k < primes.size(); ++k) {
        for (std::size_t l = j; l < primes.size(); ++l) {
          if (k == l) continue;
          for (unsigned long e1 = 1; e1 <= 3; ++e1) {
            for (unsigned long e2 = 1; e2 <= 3; ++e2) {
              REQUIRE(index_of({primes[i], primes[j]}, {e1, e2}) >= index_of({primes[k], primes[l]}, {e1, e2}));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("index is strictly below the prime-support bound") {
  for (std::uint64_t n = 2; n <= 100'000; ++n) {
    const auto f = factorize(n);
    const auto ps = f.primes();
    REQUIRE(abundancy_index(f) < index_upper_bound(ps));
  }
}

TEST_CASE("are_friends examples and symmetry") {
  CHECK(are_friends(6, 28));
  CHECK_FALSE(are_friends(10, 10));
  CHECK(are_friends(30, 140));
  CHECK_FALSE(are_friends(10, 20));
  for (unsigned long m = 1; m <= 200; ++m) {
    REQUIRE_FALSE(are_friends(m, m));
    for (unsigned long n = m + 1; n <= 200; ++n) REQUIRE(are_friends(m, n) == are_friends(n, m));
  }
}

TEST_CASE("friend_pair orders its members") {
  const auto pair = friend_pair(140, 30);
  REQUIRE(pair.has_value());
  CHECK(pair->smaller == 30);
  CHECK(pair->larger == 140);
  CHECK(pair->shared_index == ratio(12, 5));
  CHECK_FALSE(friend_pair(10, 10).has_value());
}

TEST_CASE("find_friends examples") {
  CHECK(find_friends(6, 1000) == naturals({28, 496}));
  CHECK(find_friends(10, 1'000'000).empty());
  CHECK(find_friends(30, 200) == naturals({140}));
}

TEST_CASE("find_friends matches a brute-force index scan") {
  const auto table = oracle::divisor_sum_table(5001);
  for (std::uint64_t n : {6u, 12u, 24u, 30u, 40u, 80u, 84u, 120u}) {
    const auto target = brute_index(n);
    std::vector<Natural> expected;
    for (std::uint64_t m = 1; m <= 5000; ++m) {
      if (m != n && ExactRatio(from_u64(table[m]), from_u64(m)) == target) expected.push_back(from_u64(m));
    }
    REQUIRE(find_friends(from_u64(n), 5000) == expected);
  }
}

TEST_CASE("find_friends is the same on both paths and any worker count") {
  FindFriendsOptions sieve;
  sieve.workers = 3;
  sieve.segment_size = 777;
  FindFriendsOptions direct;
  direct.sieve_threshold = 0;
  const auto a = find_friends(6, 10'000, sieve);
  const auto b = find_friends(6, 10'000, direct);
  CHECK(a == naturals({28, 496, 8128}));
  CHECK(a == b);
}

TEST_CASE("solitary_certificate examples") {
  CHECK(solitary_certificate(5) == SolitaryVerdict::CertifiedSolitary);
  CHECK(solitary_certificate(10) == SolitaryVerdict::Inconclusive);
  CHECK(solitary_certificate(1) == SolitaryVerdict::CertifiedSolitary);
  CHECK(std::string(to_string(SolitaryVerdict::Inconclusive)) == "Inconclusive");
}

TEST_CASE("IndexMatcher") {
  const IndexMatcher m(ratio(9, 5));
  CHECK(m.matches(10, 18));
  CHECK_FALSE(m.matches(20, 42));
  const IndexMatcher huge(ExactRatio(Natural("100000000000000000000000"), Natural(1)));
  CHECK_FALSE(huge.matches(1, 1));
}
