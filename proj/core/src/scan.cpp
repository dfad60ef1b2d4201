#include "amity/scan.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "amity/abundancy.hpp"
#include "amity/errors.hpp"
#include "amity/sigma_sieve.hpp"
#include "parallel.hpp"

namespace amity {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Single segment

ScanRecord scan_range(std::uint64_t lo, std::uint64_t hi, const ExactRatio& target, const ScanOptions& options) {
  if (lo < 1 || lo >= hi) {
    throw DomainError("scan_range requires 1 <= lo < hi, got [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      ")");
  }
  if (hi - lo > options.max_segment_len) {
    throw ResourceLimitError("segment of " + std::to_string(hi - lo) + " integers exceeds the budget of " +
                             std::to_string(options.max_segment_len) + "; split the range");
  }
  const auto start = std::chrono::steady_clock::now();

  ScanRecord record;
  record.lo = lo;
  record.hi = hi;
  record.target_index = target;
  record.scanned_count = hi - lo;

  std::vector<std::uint64_t> sig(hi - lo), scratch;
  sigma_segment(lo, hi, sig, scratch);

  const IndexMatcher matcher(target);
  std::uint64_t checksum = 0;
  for (std::uint64_t n = lo; n < hi; ++n) {
    const std::uint64_t s = sig[n - lo];
    checksum += s;
    if (matcher.matches(n, s)) record.hits.push_back(n);
  }
  record.checksum = checksum;

  if (options.verify_hits) {
    for (std::uint64_t h : record.hits) {
      if (abundancy_index(factorize(h, options.factorize)) != target) {
        throw InternalConsistencyError("sieve hit " + std::to_string(h) + " does not have index " +
                                       target.to_string());
      }
    }
  }
  record.elapsed_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
  return record;
}

// ---------------------------------------------------------------------------
// JSON encoding

namespace {

std::string dec(std::uint64_t v) { return std::to_string(v); }

std::uint64_t parse_u64(const json& j, const char* field) {
  if (!j.is_string()) throw DomainError(std::string("field '") + field + "' must be a decimal string");
  const std::string& s = j.get_ref<const std::string&>();
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw DomainError(std::string("field '") + field + "' is not a decimal natural");
  }
  return to_u64(Natural(s, 10));
}

json record_to_json(const ScanRecord& r) {
  json hits = json::array();
  for (auto h : r.hits) hits.push_back(dec(h));
  return json{{"lo", dec(r.lo)},
              {"hi", dec(r.hi)},
              {"target_index", r.target_index.to_string()},
              {"hits", std::move(hits)},
              {"scanned_count", dec(r.scanned_count)},
              {"elapsed_ms", dec(r.elapsed_ms)},
              {"checksum", dec(r.checksum)}};
}

ScanRecord record_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("scan record must be a JSON object");
  ScanRecord r;
  r.lo = parse_u64(j.at("lo"), "lo");
  r.hi = parse_u64(j.at("hi"), "hi");
  r.target_index = ExactRatio::parse(j.at("target_index").get<std::string>());
  for (const auto& h : j.at("hits")) r.hits.push_back(parse_u64(h, "hits"));
  r.scanned_count = parse_u64(j.at("scanned_count"), "scanned_count");
  r.elapsed_ms = parse_u64(j.at("elapsed_ms"), "elapsed_ms");
  r.checksum = parse_u64(j.at("checksum"), "checksum");
  if (r.lo >= r.hi || r.scanned_count != r.hi - r.lo) throw DomainError("scan record bounds are inconsistent");
  for (auto h : r.hits) {
    if (h < r.lo || h >= r.hi) throw DomainError("scan record hit lies outside its segment");
  }
  return r;
}

}  // namespace

std::string to_json_line(const ScanRecord& record) { return record_to_json(record).dump(); }

ScanRecord parse_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw CorruptFileError(std::string("malformed scan record: ") + e.what(), e.byte);
  }
  try {
    return record_from_json(j);
  } catch (const json::exception& e) {
    throw CorruptFileError(std::string("malformed scan record: ") + e.what(), line.size());
  } catch (const DomainError& e) {
    throw CorruptFileError(std::string("malformed scan record: ") + e.what(), line.size());
  }
}

void write_results(std::ostream& out, const std::vector<ScanRecord>& records) {
  for (const auto& r : records) out << to_json_line(r) << '\n';
}

std::vector<ScanRecord> read_results(std::istream& in) {
  std::vector<ScanRecord> out;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      try {
        out.push_back(parse_json_line(line));
      } catch (const CorruptFileError& e) {
        throw CorruptFileError("results file: " + std::string(e.what()), offset + e.offset());
      }
    }
    offset += line.size() + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checkpoints

std::string run_fingerprint(const ExactRatio& target, std::uint64_t bound, std::uint64_t segment_size) {
  const std::string canonical = "amity-scan/v" + std::to_string(kCheckpointVersion) + "|" + target.to_string() +
                                "|" + std::to_string(bound) + "|" + std::to_string(segment_size);
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

namespace {

std::uint64_t contiguous_frontier(const std::vector<ScanRecord>& sorted) {
  std::uint64_t frontier = 1;
  for (const auto& r : sorted) {
    if (r.lo != frontier) break;
    frontier = r.hi;
  }
  return frontier;
}

json checkpoint_to_json(const Checkpoint& c) {
  json pending = json::array();
  for (const auto& s : c.pending) pending.push_back(json::array({dec(s.lo), dec(s.hi)}));
  json completed = json::array();
  for (const auto& r : c.completed) completed.push_back(record_to_json(r));
  return json{{"version", c.version},
              {"fingerprint", c.fingerprint},
              {"target_index", c.target_index.to_string()},
              {"bound", dec(c.bound)},
              {"segment_size", dec(c.segment_size)},
              {"frontier", dec(c.frontier)},
              {"pending", std::move(pending)},
              {"completed", std::move(completed)}};
}

}  // namespace

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write checkpoint: " + tmp.string());
    out << checkpoint_to_json(checkpoint).dump(2) << '\n';
    out.flush();
    if (!out) throw DomainError("failed writing checkpoint: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read checkpoint: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CorruptFileError("corrupt checkpoint " + path.string() + ": " + e.what(), e.byte);
  }

  if (!j.is_object() || !j.contains("version") || !j.at("version").is_number_integer()) {
    throw CorruptFileError("corrupt checkpoint " + path.string() + ": missing integer \"version\"", text.size());
  }
  const int version = j.at("version").get<int>();
  if (version != kCheckpointVersion) {
    throw DomainError("unsupported checkpoint version " + std::to_string(version) + " (expected " +
                      std::to_string(kCheckpointVersion) + ")");
  }

  Checkpoint c;
  try {
    c.version = version;
    c.fingerprint = j.at("fingerprint").get<std::string>();
    c.target_index = ExactRatio::parse(j.at("target_index").get<std::string>());
    c.bound = parse_u64(j.at("bound"), "bound");
    c.segment_size = parse_u64(j.at("segment_size"), "segment_size");
    c.frontier = parse_u64(j.at("frontier"), "frontier");
    for (const auto& s : j.at("pending")) {
      if (!s.is_array() || s.size() != 2) throw DomainError("pending entries must be [lo, hi] pairs");
      c.pending.push_back({parse_u64(s[0], "pending.lo"), parse_u64(s[1], "pending.hi")});
    }
    for (const auto& r : j.at("completed")) c.completed.push_back(record_from_json(r));
  } catch (const json::exception& e) {
    throw CorruptFileError("corrupt checkpoint " + path.string() + ": " + e.what(), text.size());
  } catch (const DomainError& e) {
    throw CorruptFileError("corrupt checkpoint " + path.string() + ": " + e.what(), text.size());
  }

  auto sorted = c.completed;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  if (contiguous_frontier(sorted) < c.frontier) {
    throw CorruptFileError("corrupt checkpoint " + path.string() + ": frontier is not covered by completed segments",
                           text.size());
  }
  return c;
}

Checkpoint load_checkpoint(const std::filesystem::path& path, const std::string& expected_fingerprint) {
  Checkpoint c = load_checkpoint(path);
  if (c.fingerprint != expected_fingerprint) {
    throw FingerprintMismatchError("checkpoint " + path.string() + " was written for a different run (fingerprint " +
                                   c.fingerprint + ", expected " + expected_fingerprint + ")");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Whole runs

std::vector<Segment> plan_segments(std::uint64_t bound, std::uint64_t segment_size) {
  if (segment_size == 0) throw DomainError("segment size must be >= 1");
  std::vector<Segment> out;
  for (std::uint64_t lo = 1; lo < bound; lo += std::min(segment_size, bound - lo)) {
    out.push_back({lo, lo + std::min(segment_size, bound - lo)});
  }
  return out;
}

std::vector<std::uint64_t> ScanRun::hits() const {
  std::vector<std::uint64_t> out;
  for (const auto& r : records) out.insert(out.end(), r.hits.begin(), r.hits.end());
  return out;
}

std::uint64_t ScanRun::checksum() const {
  std::uint64_t sum = 0;
  for (const auto& r : records) sum += r.checksum;
  return sum;
}

ScanRun run_scan(std::uint64_t bound, const ExactRatio& target, const ScanRunOptions& options) {
  if (bound < 2) throw DomainError("scan requires bound >= 2");
  const std::uint64_t segment_size = options.scan.segment_size;
  const auto plan = plan_segments(bound, segment_size);
  const std::string fingerprint = run_fingerprint(target, bound, segment_size);

  std::vector<ScanRecord> completed;
  if (options.checkpoint_path && std::filesystem::exists(*options.checkpoint_path)) {
    Checkpoint restored = load_checkpoint(*options.checkpoint_path, fingerprint);
    const std::set<Segment> planned(plan.begin(), plan.end());
    for (auto& r : restored.completed) {
      if (!planned.count({r.lo, r.hi})) {
        throw CorruptFileError("checkpoint segment [" + dec(r.lo) + ", " + dec(r.hi) + ") is not in the run plan", 0);
      }
      completed.push_back(std::move(r));
    }
  }

  std::set<Segment> done;
  for (const auto& r : completed) done.insert({r.lo, r.hi});
  std::vector<Segment> todo;
  for (const auto& s : plan) {
    if (!done.count(s)) todo.push_back(s);
  }
  if (options.max_segments && todo.size() > *options.max_segments) todo.resize(*options.max_segments);

  std::mutex mu;
  auto snapshot = [&]() {
    Checkpoint c;
    c.target_index = target;
    c.bound = bound;
    c.segment_size = segment_size;
    c.fingerprint = fingerprint;
    c.completed = completed;
    std::sort(c.completed.begin(), c.completed.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    c.frontier = contiguous_frontier(c.completed);
    std::set<Segment> finished;
    for (const auto& r : c.completed) finished.insert({r.lo, r.hi});
    for (const auto& s : plan) {
      if (!finished.count(s)) c.pending.push_back(s);
    }
    return c;
  };

  detail::run_work_queue(todo.size(), options.workers, [&](std::size_t i) {
    ScanRecord record = scan_range(todo[i].lo, todo[i].hi, target, options.scan);
    std::lock_guard lock(mu);
    completed.push_back(std::move(record));
    if (options.checkpoint_path) save_checkpoint(snapshot(), *options.checkpoint_path);
  });

  ScanRun run;
  run.target_index = target;
  run.bound = bound;
  run.scanned_this_run = todo;
  run.records = std::move(completed);
  std::sort(run.records.begin(), run.records.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  run.frontier = contiguous_frontier(run.records);
  run.complete = run.records.size() == plan.size();
  return run;
}

// ---------------------------------------------------------------------------
// Structured candidates

namespace {

// Next integer after q that is coprime to 30.
std::uint64_t next_coprime_30(std::uint64_t q) {
  do {
    ++q;
  } while (q % 2 == 0 || q % 3 == 0 || q % 5 == 0);
  return q;
}

}  // namespace

StructuredEnumerator::StructuredEnumerator(Natural bound) : bound_(std::move(bound)) {
  if (bound_ < 25) throw DomainError("enumerate_structured requires bound >= 25");
  Natural five_2a = 25;
  for (unsigned long a = 1; five_2a <= bound_; ++a, five_2a *= 25) heap_.push({five_2a, a, 1, five_2a});
}

std::optional<Candidate> StructuredEnumerator::next() {
  if (heap_.empty()) return std::nullopt;
  Stream top = heap_.top();
  heap_.pop();
  Candidate out(top.a, factorize(top.q));
  Stream advanced = top;
  advanced.q = next_coprime_30(top.q);
  Natural q = from_u64(advanced.q);
  advanced.f = top.five_2a * q * q;
  if (advanced.f <= bound_) heap_.push(std::move(advanced));
  return out;
}

std::vector<Candidate> enumerate_structured(const Natural& bound) {
  StructuredEnumerator e(bound);
  std::vector<Candidate> out;
  while (auto c = e.next()) out.push_back(std::move(*c));
  return out;
}

CandidateSurvey survey_structured(const Natural& bound) {
  CandidateSurvey survey;
  StructuredEnumerator e(bound);
  while (auto c = e.next()) {
    ++survey.candidates;
    const FilterReport report = filter_chain(*c);
    if (report.rejected_by) {
      ++survey.rejected_by[static_cast<std::size_t>(*report.rejected_by)];
    } else {
      ++survey.survivors;
    }
    if (eq1_check(*c)) survey.eq1_true.push_back(c->id());
  }
  return survey;
}

}  // namespace amity
