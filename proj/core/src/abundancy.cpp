#include "amity/abundancy.hpp"

#include <algorithm>

#include "amity/errors.hpp"
#include "amity/sigma_sieve.hpp"
#include "parallel.hpp"

namespace amity {

ExactRatio abundancy_index(const Factorization& f) {
  ExactRatio index = ExactRatio::whole(1);
  for (const auto& [p, e] : f.pairs()) {
    index *= ExactRatio(amity::pow(p, e + 1) - 1, amity::pow(p, e) * (p - 1));
  }
  return index;
}

ExactRatio abundancy_index(const Natural& n, const FactorizeOptions& options) {
  return abundancy_index(factorize(n, options));
}

ExactRatio index_upper_bound(std::span<const Natural> primes) {
  if (primes.empty()) throw DomainError("index_upper_bound requires a non-empty prime list");
  std::vector<Natural> seen(primes.begin(), primes.end());
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw DomainError("index_upper_bound requires distinct primes");
  }
  ExactRatio bound = ExactRatio::whole(1);
  for (const auto& p : primes) {
    if (!is_prime(p)) throw DomainError("index_upper_bound entry is not prime: " + to_string(p));
    bound *= ExactRatio(p, p - 1);
  }
  return bound;
}

bool are_friends(const Natural& m, const Natural& n, const FactorizeOptions& options) {
  if (m < 1 || n < 1) throw DomainError("are_friends requires m, n >= 1");
  if (m == n) return false;
  return abundancy_index(m, options) == abundancy_index(n, options);
}

std::optional<FriendPair> friend_pair(const Natural& m, const Natural& n, const FactorizeOptions& options) {
  if (m < 1 || n < 1) throw DomainError("friend_pair requires m, n >= 1");
  if (m == n) return std::nullopt;
  auto index = abundancy_index(m, options);
  if (index != abundancy_index(n, options)) return std::nullopt;
  return FriendPair{m < n ? m : n, m < n ? n : m, std::move(index)};
}

IndexMatcher::IndexMatcher(const ExactRatio& target) {
  const Natural num = target.numerator();
  const Natural den = target.denominator();
  representable_ = fits_u64(num) && fits_u64(den);
  if (representable_) {
    num_ = to_u64(num);
    den_ = to_u64(den);
  }
}

std::vector<Natural> find_friends(const Natural& n, const Natural& bound, const FindFriendsOptions& options) {
  if (n < 1) throw DomainError("find_friends requires n >= 1");
  if (bound < 1) return {};
  const ExactRatio target = abundancy_index(n, options.factorize);
  const std::uint64_t segment = std::max<std::uint64_t>(options.segment_size, 1);

  if (fits_u64(bound) && to_u64(bound) <= options.sieve_threshold) {
    const std::uint64_t end = to_u64(bound) + 1;
    const std::size_t segments = (end - 1 + segment - 1) / segment;
    const IndexMatcher matcher(target);
    std::vector<std::vector<std::uint64_t>> hits(segments);
    detail::run_work_queue(segments, options.workers, [&](std::size_t s) {
      const std::uint64_t lo = 1 + s * segment;
      const std::uint64_t hi = std::min(end, lo + segment);
      std::vector<std::uint64_t> sig(hi - lo), scratch;
      sigma_segment(lo, hi, sig, scratch);
      for (std::uint64_t m = lo; m < hi; ++m) {
        if (matcher.matches(m, sig[m - lo])) hits[s].push_back(m);
      }
    });
    std::vector<Natural> out;
    for (const auto& seg : hits) {
      for (std::uint64_t m : seg) {
        if (Natural(from_u64(m)) != n) out.push_back(from_u64(m));
      }
    }
    return out;
  }

  // Per-m factoring; chunks of the range are processed independently and
  // merged in ascending order.
  const Natural chunks_n = (bound + segment - 1) / segment;
  if (!chunks_n.fits_ulong_p()) throw ResourceLimitError("find_friends bound is too large to scan");
  const std::size_t chunks = chunks_n.get_ui();
  std::vector<std::vector<Natural>> hits(chunks);
  detail::run_work_queue(chunks, options.workers, [&](std::size_t s) {
    Natural m = Natural(static_cast<unsigned long>(s)) * segment + 1;
    Natural hi = m + segment;
    if (hi > bound + 1) hi = bound + 1;
    for (; m < hi; ++m) {
      if (m != n && abundancy_index(m, options.factorize) == target) hits[s].push_back(m);
    }
  });
  std::vector<Natural> out;
  for (auto& seg : hits) {
    for (auto& m : seg) out.push_back(std::move(m));
  }
  return out;
}

SolitaryVerdict solitary_certificate(const Natural& n, const FactorizeOptions& options) {
  if (n < 1) throw DomainError("solitary_certificate requires n >= 1");
  const Natural s = sigma(factorize(n, options));
  return gcd(n, s) == 1 ? SolitaryVerdict::CertifiedSolitary : SolitaryVerdict::Inconclusive;
}

const char* to_string(SolitaryVerdict v) {
  switch (v) {
    case SolitaryVerdict::CertifiedSolitary:
      return "CertifiedSolitary";
    case SolitaryVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

}  // namespace amity
