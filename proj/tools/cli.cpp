#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "amity/abundancy.hpp"
#include "amity/arith.hpp"
#include "amity/errors.hpp"
#include "amity/friend10.hpp"
#include "amity/scan.hpp"
#include "amity/verify.hpp"

namespace amity::cli {

namespace {

using json = nlohmann::ordered_json;

struct Outcome {
  json inputs = json::object();
  json result = json::object();
  std::string human;
  int exit_code = kExitOk;
};

std::string env(const std::string& flag) { return std::string(kEnvPrefix) + flag; }

const CLI::Validator kNatural(
    [](std::string& s) {
      try {
        parse_natural(s);
        return std::string();
      } catch (const DomainError& e) {
        return std::string(e.what());
      }
    },
    "NATURAL", "natural");

const CLI::Validator kRatio(
    [](std::string& s) {
      try {
        ExactRatio::parse(s);
        return std::string();
      } catch (const DomainError& e) {
        return std::string(e.what());
      }
    },
    "P/Q", "ratio");

std::string table(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  std::ostringstream out;
  for (const auto& [k, v] : rows) out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
  return out.str();
}

template <typename Range, typename Fn>
std::string joined(const Range& items, const std::string& sep, Fn&& fmt) {
  std::string out;
  bool first = true;
  for (const auto& item : items) {
    if (!first) out += sep;
    out += fmt(item);
    first = false;
  }
  return out;
}

json strings(const std::vector<Natural>& values) {
  json arr = json::array();
  for (const auto& v : values) arr.push_back(to_string(v));
  return arr;
}

// --- subcommands -----------------------------------------------------------

Outcome cmd_sigma(const std::string& n_text) {
  const Natural n = parse_natural(n_text);
  if (n < 1) throw DomainError("sigma requires N >= 1");
  const auto f = factorize(n);
  const Natural s = sigma(f);
  Outcome o;
  o.inputs = {{"n", to_string(n)}};
  o.result = {{"n", to_string(n)}, {"factorization", f.to_string()}, {"sigma", to_string(s)}};
  o.human = to_string(s) + "\n";
  return o;
}

Outcome cmd_index(const std::string& n_text) {
  const Natural n = parse_natural(n_text);
  if (n < 1) throw DomainError("index requires N >= 1");
  const ExactRatio idx = abundancy_index(n);
  Outcome o;
  o.inputs = {{"n", to_string(n)}};
  o.result = {{"n", to_string(n)},
              {"index", idx.to_string()},
              {"numerator", to_string(idx.numerator())},
              {"denominator", to_string(idx.denominator())}};
  o.human = idx.to_string() + "\n";
  return o;
}

Outcome cmd_friends(const std::string& n_text, const std::string& bound_text, unsigned workers) {
  const Natural n = parse_natural(n_text);
  const Natural bound = parse_natural(bound_text);
  if (n < 1) throw DomainError("friends requires N >= 1");
  FindFriendsOptions opts;
  opts.workers = workers;
  const auto found = find_friends(n, bound, opts);
  const ExactRatio idx = abundancy_index(n);
  Outcome o;
  o.inputs = {{"n", to_string(n)}, {"bound", to_string(bound)}, {"workers", std::to_string(workers)}};
  o.result = {{"n", to_string(n)}, {"index", idx.to_string()}, {"bound", to_string(bound)}, {"friends", strings(found)}};
  o.human = table({{"n", to_string(n)},
                   {"index", idx.to_string()},
                   {"bound", to_string(bound)},
                   {"friends", found.empty() ? "(none)" : joined(found, " ", [](const Natural& m) { return to_string(m); })}});
  return o;
}

Outcome cmd_solitary(const std::string& n_text) {
  const Natural n = parse_natural(n_text);
  if (n < 1) throw DomainError("solitary requires N >= 1");
  const Natural s = sigma(factorize(n));
  const SolitaryVerdict v = solitary_certificate(n);
  Outcome o;
  o.inputs = {{"n", to_string(n)}};
  o.result = {{"n", to_string(n)}, {"sigma", to_string(s)}, {"gcd", to_string(gcd(n, s))}, {"verdict", to_string(v)}};
  o.human = std::string(to_string(v)) + "\n";
  return o;
}

Outcome cmd_check(const std::string& a_text, const std::string& q_text) {
  const Natural a = parse_natural(a_text);
  if (a < 1 || !a.fits_ulong_p()) throw DomainError("check requires 1 <= A < 2^64");
  const Candidate c(a.get_ui(), parse_prime_powers(q_text));
  const FilterReport report = filter_chain(c);
  const std::string overall =
      report.rejected_by ? std::string("RejectedBy(") + rule_name(*report.rejected_by) + ")" : std::string("Survives");

  Outcome o;
  o.inputs = {{"a", to_string(a)}, {"q_factors", q_text}};
  json rules = json::array();
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& r : report.outcomes) {
    rules.push_back({{"rule", rule_name(r.rule)}, {"verdict", to_string(r.verdict)}, {"detail", r.detail}});
    std::string verdict = to_string(r.verdict);
    verdict.resize(15, ' ');
    rows.emplace_back(rule_name(r.rule), verdict + r.detail);
  }
  o.result = {{"candidate", report.candidate_id},
              {"f", to_string(c.value())},
              {"omega", std::to_string(c.omega())},
              {"rules", std::move(rules)},
              {"overall", overall}};
  o.human = "candidate  " + report.candidate_id + "\n" + table(rows) + "overall    " + overall + "\n";
  return o;
}

Outcome cmd_derive(const std::string& a_text) {
  const Natural a = parse_natural(a_text);
  if (a < 1 || !a.fits_ulong_p()) throw DomainError("derive requires 1 <= A < 2^64");
  const ResidueClass cls = derive_residue_class(a.get_ui());
  Outcome o;
  o.inputs = {{"a", to_string(a)}};
  o.result = {{"a", to_string(a)}, {"modulus", to_string(cls.modulus)}, {"residue", to_string(cls.residue)}};
  o.human = table({{"modulus", to_string(cls.modulus)}, {"residue", to_string(cls.residue)}});
  return o;
}

struct ScanArgs {
  std::string bound;
  std::string index;
  std::string resume;
  std::string results;
  std::string segment_size = "1048576";
  unsigned workers = 1;
  std::size_t stop_after = 0;
};

Outcome cmd_scan(const ScanArgs& args) {
  const std::uint64_t bound = to_u64(parse_natural(args.bound));
  const ExactRatio target = ExactRatio::parse(args.index);
  ScanRunOptions opts;
  opts.workers = args.workers;
  opts.scan.segment_size = to_u64(parse_natural(args.segment_size));
  if (opts.scan.segment_size == 0) throw DomainError("segment size must be >= 1");
  if (!args.resume.empty()) opts.checkpoint_path = args.resume;
  if (args.stop_after > 0) opts.max_segments = args.stop_after;

  const ScanRun run = run_scan(bound, target, opts);
  const std::size_t total = plan_segments(bound, opts.scan.segment_size).size();
  if (!args.results.empty()) {
    std::ofstream file(args.results, std::ios::binary | std::ios::trunc);
    if (!file) throw DomainError("cannot write results file: " + args.results);
    write_results(file, run.records);
  }

  const auto hits = run.hits();
  json hit_list = json::array();
  for (auto h : hits) hit_list.push_back(std::to_string(h));
  Outcome o;
  o.inputs = {{"bound", std::to_string(bound)},
              {"index", target.to_string()},
              {"workers", std::to_string(args.workers)},
              {"segment_size", std::to_string(opts.scan.segment_size)},
              {"resume", args.resume},
              {"results", args.results}};
  o.result = {{"bound", std::to_string(bound)},
              {"index", target.to_string()},
              {"segments_total", std::to_string(total)},
              {"segments_completed", std::to_string(run.records.size())},
              {"segments_scanned_this_run", std::to_string(run.scanned_this_run.size())},
              {"frontier", std::to_string(run.frontier)},
              {"complete", run.complete},
              {"hits", std::move(hit_list)},
              {"checksum", std::to_string(run.checksum())}};
  o.human = table({{"bound", std::to_string(bound)},
                   {"index", target.to_string()},
                   {"segments", std::to_string(run.records.size()) + "/" + std::to_string(total)},
                   {"frontier", std::to_string(run.frontier)},
                   {"complete", run.complete ? "true" : "false"},
                   {"hits", hits.empty() ? "(none)" : joined(hits, " ", [](std::uint64_t h) { return std::to_string(h); })},
                   {"checksum", std::to_string(run.checksum())}});
  return o;
}

Outcome cmd_verify(const std::string& suite) {
  const auto results = run_suite(suite);
  Outcome o;
  o.inputs = {{"suite", suite}};
  json suites = json::array();
  std::ostringstream human;
  human << std::left << std::setw(10) << "suite" << std::setw(10) << "checks" << std::setw(10) << "failures"
        << "status\n";
  bool all_passed = true;
  for (const auto& r : results) {
    all_passed = all_passed && r.passed();
    suites.push_back({{"name", r.name},
                      {"checks", std::to_string(r.checks)},
                      {"failures", std::to_string(r.failures)},
                      {"passed", r.passed()},
                      {"failure_samples", r.failure_samples}});
    human << std::setw(10) << r.name << std::setw(10) << r.checks << std::setw(10) << r.failures
          << (r.passed() ? "pass" : "FAIL") << '\n';
    for (const auto& s : r.failure_samples) human << "  " << s << '\n';
  }
  o.result = {{"suites", std::move(suites)}, {"passed", all_passed}};
  o.human = human.str();
  if (!all_passed) o.exit_code = kExitDomainError;
  return o;
}

int report_error(const char* kind, const std::string& message, bool as_json, std::ostream& out, std::ostream& err,
                 int code) {
  if (as_json) {
    out << json{{"error", {{"kind", kind}, {"message", message}}}}.dump(2) << '\n';
  } else {
    err << "error (" << kind << "): " << message << '\n';
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Abundancy-index toolkit: sigma, friends, and constraints on friends of 10"};
  app.name("amity");
  app.require_subcommand(1);
  app.fallthrough();

  bool as_json = false;
  app.add_flag("--json", as_json, "Emit a JSON envelope instead of a table")->envname(env("JSON"));

  std::function<Outcome()> action;
  std::string n_text, bound_text, index_text, a_text, q_text, suite;
  unsigned workers = 1;
  ScanArgs scan_args;

  auto* sigma_cmd = app.add_subcommand("sigma", "Sum of divisors of N");
  sigma_cmd->add_option("N", n_text)->required()->check(kNatural)->envname(env("N"));
  sigma_cmd->callback([&] { action = [&] { return cmd_sigma(n_text); }; });

  auto* index_cmd = app.add_subcommand("index", "Abundancy index sigma(N)/N");
  index_cmd->add_option("N", n_text)->required()->check(kNatural)->envname(env("N"));
  index_cmd->callback([&] { action = [&] { return cmd_index(n_text); }; });

  auto* friends_cmd = app.add_subcommand("friends", "Integers up to the bound sharing N's index");
  friends_cmd->add_option("N", n_text)->required()->check(kNatural)->envname(env("N"));
  friends_cmd->add_option("--bound", bound_text, "Inclusive search bound")->required()->check(kNatural)->envname(env("BOUND"));
  friends_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::Range(1u, 1024u))->envname(env("WORKERS"));
  friends_cmd->callback([&] { action = [&] { return cmd_friends(n_text, bound_text, workers); }; });

  auto* solitary_cmd = app.add_subcommand("solitary", "gcd(N, sigma(N)) = 1 certificate");
  solitary_cmd->add_option("N", n_text)->required()->check(kNatural)->envname(env("N"));
  solitary_cmd->callback([&] { action = [&] { return cmd_solitary(n_text); }; });

  auto* check_cmd = app.add_subcommand("check", "Run the filter chain on F = 5^(2A) * Q^2");
  check_cmd->add_option("--a", a_text, "Exponent A")->required()->check(kNatural)->envname(env("A"));
  check_cmd->add_option("--q-factors", q_text, "Q as P1^E1,P2^E2,... (empty for Q = 1)")->envname(env("Q_FACTORS"));
  check_cmd->callback([&] { action = [&] { return cmd_check(a_text, q_text); }; });

  auto* derive_cmd = app.add_subcommand("derive", "Residue class of F forced by 5^(2A) || F");
  derive_cmd->add_option("--a", a_text, "Exponent A")->required()->check(kNatural)->envname(env("A"));
  derive_cmd->callback([&] { action = [&] { return cmd_derive(a_text); }; });

  auto* scan_cmd = app.add_subcommand("scan", "Exhaustive scan of [1, B) for a target index");
  scan_cmd->add_option("--bound", scan_args.bound, "Exclusive bound B")->required()->check(kNatural)->envname(env("BOUND"));
  scan_cmd->add_option("--index", scan_args.index, "Target index P/Q")->required()->check(kRatio)->envname(env("INDEX"));
  scan_cmd->add_option("--resume", scan_args.resume, "Checkpoint file to create or resume")->envname(env("RESUME"));
  scan_cmd->add_option("--workers", scan_args.workers, "Worker threads")->check(CLI::Range(1u, 1024u))->envname(env("WORKERS"));
  scan_cmd->add_option("--results", scan_args.results, "Write JSON-lines segment records here")->envname(env("RESULTS"));
  scan_cmd->add_option("--segment-size", scan_args.segment_size, "Integers per segment")->check(kNatural)->envname(env("SEGMENT_SIZE"));
  scan_cmd->add_option("--stop-after", scan_args.stop_after, "Stop after this many segments")->envname(env("STOP_AFTER"));
  scan_cmd->callback([&] { action = [&] { return cmd_scan(scan_args); }; });

  auto* verify_cmd = app.add_subcommand("verify", "Run invariant suites and report pass/fail counts");
  verify_cmd->add_option("--suite", suite, "lemma21, prop22, thm31, mod8, bounds, residue or all")
      ->required()
      ->check(CLI::IsMember({"lemma21", "prop22", "thm31", "mod8", "bounds", "residue", "all"}))
      ->envname(env("SUITE"));
  verify_cmd->callback([&] { action = [&] { return cmd_verify(suite); }; });

  std::vector<std::string> argv_store{"amity"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), as_json, out, err, kExitUsageError);
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome o = action();
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    if (as_json) {
      json envelope = {{"command", app.get_subcommands().front()->get_name()},
                       {"inputs", std::move(o.inputs)},
                       {"result", std::move(o.result)},
                       {"elapsed_ms", std::to_string(elapsed.count())}};
      out << envelope.dump(2) << '\n';
    } else {
      out << o.human;
    }
    return o.exit_code;
  } catch (const FingerprintMismatchError& e) {
    return report_error("fingerprint_mismatch", e.what(), as_json, out, err, kExitDomainError);
  } catch (const CorruptFileError& e) {
    return report_error("corrupt_file", e.what(), as_json, out, err, kExitDomainError);
  } catch (const ResourceLimitError& e) {
    return report_error("resource_limit", e.what(), as_json, out, err, kExitDomainError);
  } catch (const DomainError& e) {
    return report_error("domain", e.what(), as_json, out, err, kExitDomainError);
  }
}

}  // namespace amity::cli
