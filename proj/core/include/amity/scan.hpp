#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "amity/arith.hpp"
#include "amity/exact_ratio.hpp"
#include "amity/friend10.hpp"

namespace amity {

/// One scanned half-open segment [lo, hi).
struct ScanRecord {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  ExactRatio target_index;
  std::vector<std::uint64_t> hits;
  std::uint64_t scanned_count = 0;
  std::uint64_t elapsed_ms = 0;
  /// sum of sigma(n) over the segment, mod 2^64.
  std::uint64_t checksum = 0;

  bool operator==(const ScanRecord&) const = default;
};

struct ScanOptions {
  std::uint64_t segment_size = std::uint64_t{1} << 20;
  /// Longest segment scan_range will allocate for.
  std::uint64_t max_segment_len = std::uint64_t{1} << 26;
  /// Re-check every sieve hit by exact factorization.
  bool verify_hits = true;
  FactorizeOptions factorize;
};

/// Exact scan of [lo, hi) for integers whose index equals target. Throws
/// DomainError unless 1 <= lo < hi, and ResourceLimitError when the segment
/// is longer than options.max_segment_len.
ScanRecord scan_range(std::uint64_t lo, std::uint64_t hi, const ExactRatio& target, const ScanOptions& options = {});

struct Segment {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  bool operator==(const Segment&) const = default;
  auto operator<=>(const Segment&) const = default;
};

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  int version = kCheckpointVersion;
  ExactRatio target_index;
  std::uint64_t bound = 0;
  std::uint64_t segment_size = 0;
  /// [1, frontier) is covered by completed segments.
  std::uint64_t frontier = 1;
  std::vector<Segment> pending;
  std::vector<ScanRecord> completed;
  std::string fingerprint;

  bool operator==(const Checkpoint&) const = default;
};

/// Hex digest of the parameters that decide a run's segment layout and hits.
std::string run_fingerprint(const ExactRatio& target, std::uint64_t bound, std::uint64_t segment_size);

/// Writes through a temporary file and renames over path.
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
/// Throws CorruptFileError (with byte offset) on malformed or truncated
/// input, and DomainError on an unknown version.
Checkpoint load_checkpoint(const std::filesystem::path& path);
/// As load_checkpoint, then FingerprintMismatchError unless the fingerprint
/// matches the expected one.
Checkpoint load_checkpoint(const std::filesystem::path& path, const std::string& expected_fingerprint);

struct ScanRunOptions {
  ScanOptions scan;
  unsigned workers = 1;
  /// Created or resumed; rewritten after every completed segment.
  std::optional<std::filesystem::path> checkpoint_path;
  /// Stop dispatching after this many segments (for interrupted runs).
  std::optional<std::size_t> max_segments;
};

struct ScanRun {
  ExactRatio target_index;
  std::uint64_t bound = 0;
  /// Every completed record, restored and new, ordered by lo.
  std::vector<ScanRecord> records;
  /// Segments actually scanned by this invocation, ordered by lo.
  std::vector<Segment> scanned_this_run;
  std::uint64_t frontier = 1;
  bool complete = false;

  std::vector<std::uint64_t> hits() const;
  std::uint64_t checksum() const;
};

/// Scans [1, bound) in segments on options.workers threads. Output does not
/// depend on the worker count or completion order.
ScanRun run_scan(std::uint64_t bound, const ExactRatio& target, const ScanRunOptions& options = {});

/// Segments of [1, bound) of the given size, in order.
std::vector<Segment> plan_segments(std::uint64_t bound, std::uint64_t segment_size);

// JSON-lines results file: one record per line, integers as decimal strings.
std::string to_json_line(const ScanRecord& record);
ScanRecord parse_json_line(const std::string& line);
void write_results(std::ostream& out, const std::vector<ScanRecord>& records);
std::vector<ScanRecord> read_results(std::istream& in);

// ---------------------------------------------------------------------------
// Structured candidates F = 5^(2a) * Q^2

/// Yields every candidate with F <= bound in ascending F, each exactly once.
class StructuredEnumerator {
 public:
  /// Throws DomainError if bound < 25.
  explicit StructuredEnumerator(Natural bound);

  std::optional<Candidate> next();

 private:
  struct Stream {
    Natural f;
    unsigned long a;
    std::uint64_t q;
    Natural five_2a;
    bool operator>(const Stream& o) const { return f > o.f; }
  };
  Natural bound_;
  std::priority_queue<Stream, std::vector<Stream>, std::greater<>> heap_;
};

std::vector<Candidate> enumerate_structured(const Natural& bound);

struct CandidateSurvey {
  std::size_t candidates = 0;
  std::size_t survivors = 0;
  std::array<std::size_t, std::size(kChainOrder)> rejected_by{};
  /// Candidates that satisfied the exact equation (none are known).
  std::vector<std::string> eq1_true;
};

/// Runs filter_chain over every structured candidate with F <= bound.
CandidateSurvey survey_structured(const Natural& bound);

}  // namespace amity
