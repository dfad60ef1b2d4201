#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "amity/errors.hpp"
#include "amity/scan.hpp"
#include "amity/sigma_sieve.hpp"
#include "oracles.hpp"

using namespace amity;
namespace fs = std::filesystem;

namespace {

ExactRatio ratio(unsigned long p, unsigned long q) { return ExactRatio(Natural(p), Natural(q)); }

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("amity-scan-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("scan_range examples") {
  const auto perfect = scan_range(1, 100, ratio(2, 1));
  CHECK(perfect.hits == std::vector<std::uint64_t>{6, 28});
  CHECK(perfect.scanned_count == 99);
  CHECK(scan_range(1, 1'000'000, ratio(9, 5)).hits == std::vector<std::uint64_t>{10});
  CHECK_THROWS_AS(scan_range(2, 2, ratio(9, 5)), DomainError);
  CHECK_THROWS_AS(scan_range(0, 5, ratio(9, 5)), DomainError);
}

TEST_CASE("scan_range checksum is the divisor-sum total") {
  const auto table = oracle::divisor_sum_table(20'001);
  const auto rec = scan_range(5'000, 20'001, ratio(2, 1));
  std::uint64_t expected = 0;
  for (std::uint64_t n = 5'000; n <= 20'000; ++n) expected += table[n];
  CHECK(rec.checksum == expected);
  CHECK(rec.hits == std::vector<std::uint64_t>{8128});
}

TEST_CASE("scan_range hits agree with brute force for several targets") {
  const auto table = oracle::divisor_sum_table(30'000);
  for (auto target : {ratio(2, 1), ratio(12, 5), ratio(3, 1), ratio(7, 4), ratio(28, 15)}) {
    std::vector<std::uint64_t> expected;
    for (std::uint64_t n = 1; n < 30'000; ++n) {
      if (ExactRatio(from_u64(table[n]), from_u64(n)) == target) expected.push_back(n);
    }
    REQUIRE(scan_range(1, 30'000, target).hits == expected);
  }
}

TEST_CASE("scan_range refuses oversized segments") {
  ScanOptions opts;
  opts.max_segment_len = 1000;
  CHECK_THROWS_AS(scan_range(1, 2000, ratio(2, 1), opts), ResourceLimitError);
}

TEST_CASE("sieved sigma agrees with factorization inside a scanned range") {
  const std::uint64_t lo = 9'000'000, hi = 9'100'000;
  const auto sieved = sigma_segment(lo, hi);
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t n = lo + rng() % (hi - lo);
    REQUIRE(from_u64(sieved[n - lo]) == sigma(factorize(n)));
  }
}

TEST_CASE("run_scan is deterministic across worker counts and covers the range") {
  ScanRunOptions one;
  one.scan.segment_size = 40'000;
  ScanRunOptions many = one;
  many.workers = 5;
  const auto a = run_scan(1'000'000, ratio(9, 5), one);
  const auto b = run_scan(1'000'000, ratio(9, 5), many);
  CHECK(a.hits() == std::vector<std::uint64_t>{10});
  CHECK(a.hits() == b.hits());
  CHECK(a.checksum() == b.checksum());
  CHECK(a.complete);
  CHECK(a.frontier == 1'000'000);
  REQUIRE(a.records.size() == b.records.size());
  std::uint64_t cursor = 1;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].lo == cursor);
    CHECK(a.records[i].hi > a.records[i].lo);
    CHECK(a.records[i].scanned_count == a.records[i].hi - a.records[i].lo);
    CHECK(a.records[i].lo == b.records[i].lo);
    CHECK(a.records[i].checksum == b.records[i].checksum);
    cursor = a.records[i].hi;
  }
  CHECK(cursor == 1'000'000);
}

TEST_CASE("plan_segments tiles the range") {
  const auto segs = plan_segments(10, 4);
  CHECK(segs == std::vector<Segment>{{1, 5}, {5, 9}, {9, 10}});
  CHECK(plan_segments(2, 100) == std::vector<Segment>{{1, 2}});
}

TEST_CASE("checkpoint round trip") {
  TempDir dir;
  Checkpoint c;
  c.target_index = ratio(9, 5);
  c.bound = 1000;
  c.segment_size = 100;
  c.frontier = 201;
  c.pending = {{201, 301}, {401, 501}};
  ScanRecord r1 = scan_range(1, 101, ratio(9, 5));
  ScanRecord r2 = scan_range(101, 201, ratio(9, 5));
  ScanRecord r3 = scan_range(301, 401, ratio(9, 5));
  c.completed = {r1, r2, r3};
  c.fingerprint = run_fingerprint(c.target_index, c.bound, c.segment_size);
  const auto path = dir.path / "ck.json";
  save_checkpoint(c, path);
  CHECK(load_checkpoint(path) == c);
  CHECK(load_checkpoint(path, c.fingerprint) == c);
  CHECK(slurp(path).find("\"version\"") != std::string::npos);
}

TEST_CASE("checkpoint failure modes") {
  TempDir dir;
  Checkpoint c;
  c.target_index = ratio(2, 1);
  c.bound = 500;
  c.segment_size = 100;
  c.frontier = 101;
  c.completed = {scan_range(1, 101, ratio(2, 1))};
  c.fingerprint = run_fingerprint(c.target_index, c.bound, c.segment_size);
  const auto path = dir.path / "ck.json";
  save_checkpoint(c, path);
  const std::string text = slurp(path);

  SUBCASE("truncated") {
    const auto cut = dir.path / "cut.json";
    std::ofstream(cut, std::ios::binary) << text.substr(0, text.size() / 2);
    try {
      load_checkpoint(cut);
      FAIL("expected CorruptFileError");
    } catch (const CorruptFileError& e) {
      CHECK(e.offset() > 0);
      CHECK(e.offset() <= text.size() / 2 + 1);
    }
  }
  SUBCASE("fingerprint mismatch") {
    CHECK_THROWS_AS(load_checkpoint(path, run_fingerprint(ratio(9, 5), 500, 100)), FingerprintMismatchError);
    CHECK(run_fingerprint(ratio(2, 1), 500, 100) != run_fingerprint(ratio(2, 1), 500, 101));
  }
  SUBCASE("unknown version") {
    std::string bumped = text;
    const auto at = bumped.find("\"version\": 1");
    REQUIRE(at != std::string::npos);
    bumped.replace(at, 12, "\"version\": 7");
    const auto p = dir.path / "v7.json";
    std::ofstream(p, std::ios::binary) << bumped;
    CHECK_THROWS_AS(load_checkpoint(p), DomainError);
  }
  SUBCASE("frontier not covered") {
    Checkpoint bad = c;
    bad.frontier = 301;
    const auto p = dir.path / "bad.json";
    save_checkpoint(bad, p);
    CHECK_THROWS_AS(load_checkpoint(p), CorruptFileError);
  }
  SUBCASE("resuming with other parameters is refused") {
    ScanRunOptions opts;
    opts.scan.segment_size = 100;
    opts.checkpoint_path = path;
    CHECK_THROWS_AS(run_scan(500, ratio(9, 5), opts), FingerprintMismatchError);
  }
}

TEST_CASE("resume after frontier 10^6 rescans nothing below it") {
  TempDir dir;
  ScanRunOptions opts;
  opts.scan.segment_size = 250'000;
  opts.checkpoint_path = dir.path / "run.json";
  opts.max_segments = 4;
  const auto first = run_scan(2'000'001, ratio(9, 5), opts);
  CHECK_FALSE(first.complete);
  CHECK(first.frontier == 1'000'001);
  CHECK(first.scanned_this_run.size() == 4);
  CHECK(load_checkpoint(*opts.checkpoint_path).frontier == 1'000'001);

  opts.max_segments.reset();
  opts.workers = 3;
  const auto second = run_scan(2'000'001, ratio(9, 5), opts);
  CHECK(second.complete);
  REQUIRE_FALSE(second.scanned_this_run.empty());
  for (const auto& s : second.scanned_this_run) CHECK(s.lo >= 1'000'000);
  CHECK(second.scanned_this_run.size() == 4);

  ScanRunOptions fresh;
  fresh.scan.segment_size = 250'000;
  const auto straight = run_scan(2'000'001, ratio(9, 5), fresh);
  CHECK(second.hits() == straight.hits());
  CHECK(second.checksum() == straight.checksum());

  // A third invocation has nothing left to do.
  const auto third = run_scan(2'000'001, ratio(9, 5), opts);
  CHECK(third.scanned_this_run.empty());
  CHECK(third.complete);
}

TEST_CASE("results file round trip") {
  std::vector<ScanRecord> records = {scan_range(1, 100, ratio(2, 1)), scan_range(100, 10'000, ratio(2, 1))};
  std::stringstream ss;
  write_results(ss, records);
  const std::string text = ss.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.rfind("{\"lo\":\"1\",\"hi\":\"100\",\"target_index\":\"2/1\",\"hits\":[\"6\",\"28\"]", 0) == 0);
  std::stringstream in(text);
  CHECK(read_results(in) == records);
  CHECK(parse_json_line(to_json_line(records[1])) == records[1]);
  CHECK_THROWS_AS(parse_json_line("{\"lo\":\"1\""), CorruptFileError);
}

TEST_CASE("enumerate_structured examples") {
  const auto small = enumerate_structured(625);
  REQUIRE(small.size() == 2);
  CHECK(small[0].value() == 25);
  CHECK(small[1].value() == 625);
  CHECK(small[1].a() == 2);

  const auto with_seven = enumerate_structured(1225);
  CHECK(with_seven.back().value() == 1225);
  CHECK(with_seven.back().q() == 7);
  CHECK_THROWS_AS(StructuredEnumerator(24), DomainError);
}

TEST_CASE("enumerate_structured matches a double-loop count and is ascending") {
  const std::uint64_t bound = 1'000'000;
  std::size_t expected = 0;
  for (std::uint64_t five = 25; five <= bound; five *= 25) {
    for (std::uint64_t q = 1; five * q * q <= bound; q += 2) {
      if (std::gcd(q, std::uint64_t{15}) == 1) ++expected;
    }
  }
  const auto all = enumerate_structured(bound);
  CHECK(all.size() == expected);
  for (std::size_t i = 1; i < all.size(); ++i) REQUIRE(all[i - 1].value() < all[i].value());
  CHECK(all.back().value() <= bound);
}

TEST_CASE("no structured candidate up to 10^8 survives with the exact equation") {
  const auto survey = survey_structured(100'000'000);
  CHECK(survey.candidates > 0);
  CHECK(survey.eq1_true.empty());
  CHECK(survey.survivors == 0);
  std::size_t rejected = 0;
  for (auto n : survey.rejected_by) rejected += n;
  CHECK(rejected + survey.survivors == survey.candidates);
}
