#include "mulmatch/cli.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mulmatch/benchgen.hpp"
#include "mulmatch/errors.hpp"
#include "mulmatch/eval.hpp"
#include "mulmatch/harness.hpp"
#include "mulmatch/preprocess.hpp"
#include "mulmatch/smtlib.hpp"

namespace mulmatch {

namespace {

const char* source_name(MatchSource s) {
  return s == MatchSource::Long ? "long" : "wallace";
}

// sat status of the conjunction by enumeration; nullopt when the free bits
// exceed the limit
std::optional<bool> exhaustive_sat(const TermStore& s,
                                   const std::vector<TermId>& roots,
                                   uint32_t limit_bits, uint64_t* assignments) {
  if (roots.empty()) return true;
  Evaluator ev(s, roots);
  uint64_t total = 0;
  for (TermId v : ev.vars()) total += s.width(v);
  if (total > limit_bits || total > 63) return std::nullopt;
  if (assignments) *assignments = 1ULL << total;
  std::vector<BitVec> vals(ev.vars().size(), BitVec::zeros(1));
  for (uint64_t m = 0; m < (1ULL << total); ++m) {
    uint64_t cursor = m;
    for (size_t i = 0; i < ev.vars().size(); ++i) {
      uint32_t w = s.width(ev.vars()[i]);
      vals[i] = BitVec::from_u64(w, cursor);
      cursor >>= w;
    }
    ev.run(vals);
    bool all = true;
    for (TermId r : roots)
      if (ev.value(r).is_zero()) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

struct PreprocessArgs {
  std::string input, output, stats;
  bool long_only = false, wallace_only = false;
  bool allow_single_summand = false;
  bool match_learned = false;
  int backtrack_cap = 4096;
};

int do_preprocess(const PreprocessArgs& args) {
  TermStore s;
  Script script = normalize_bool(s, parse_file(s, args.input));
  PreprocessOptions opts;
  opts.long_enabled = !args.wallace_only;
  opts.wallace_enabled = !args.long_only;
  opts.allow_single_summand = args.allow_single_summand;
  opts.backtrack_cap = args.backtrack_cap;
  opts.match_learned = args.match_learned;
  auto [augmented, report] = preprocess(s, script, opts);
  print_file(s, augmented, args.output);
  std::cout << "scanned " << report.subterms_scanned << " subterms, matched "
            << report.entries.size() << " targets, emitted "
            << report.assertions_emitted << " learned assertions ("
            << report.duplicates_suppressed << " duplicates suppressed)\n";
  if (!args.stats.empty()) {
    nlohmann::json j;
    j["schema"] = 1;
    j["subterms_scanned"] = report.subterms_scanned;
    j["matches_found"] = report.matches_found;
    j["assertions_emitted"] = report.assertions_emitted;
    j["duplicates_suppressed"] = report.duplicates_suppressed;
    j["backtrack_budget_hits"] = report.backtrack_budget_hits;
    j["wall_seconds"] = report.wall_seconds;
    j["entries"] = nlohmann::json::array();
    for (const MatchEntry& e : report.entries) {
      j["entries"].push_back({{"target", e.target.value},
                              {"target_width", s.width(e.target)},
                              {"source", source_name(e.source)},
                              {"block_width", e.block_width},
                              {"x_width", e.x_width},
                              {"y_width", e.y_width},
                              {"candidates", e.candidates.size()}});
    }
    std::ofstream out(args.stats, std::ios::binary);
    if (!out) throw Error("cannot write " + args.stats);
    out << j.dump(2) << '\n';
  }
  return 0;
}

struct GenLongArgs {
  int blocks = 0;
  uint32_t block_width = 0;
  std::vector<int> zeros;
  std::vector<std::string> aliases;
  uint64_t seed = 0;
  bool sat = false;
  std::string output;
};

int do_generate_long(const GenLongArgs& args) {
  LongSpec spec;
  spec.blocks = args.blocks;
  spec.block_width = args.block_width;
  spec.seed = args.seed;
  spec.satisfiable = args.sat;
  spec.x_pattern.assign(args.blocks, {});
  spec.y_pattern.assign(args.blocks, {});
  auto block_at = [&](int global) -> BlockPattern& {
    if (global < 1 || global > 2 * args.blocks)
      throw InvalidSpec("block index " + std::to_string(global) +
                        " out of range 1.." + std::to_string(2 * args.blocks));
    return global <= args.blocks ? spec.x_pattern[global - 1]
                                 : spec.y_pattern[global - args.blocks - 1];
  };
  for (int z : args.zeros) block_at(z) = {BlockTag::Zero, 0};
  for (const std::string& a : args.aliases) {
    size_t eq = a.find('=');
    if (eq == std::string::npos)
      throw InvalidSpec("alias must look like I=J: " + a);
    int self = 0, target = 0;
    try {
      self = std::stoi(a.substr(0, eq));
      target = std::stoi(a.substr(eq + 1));
    } catch (const std::exception&) {
      throw InvalidSpec("alias must look like I=J: " + a);
    }
    block_at(self) = {BlockTag::Alias, target};
  }
  TermStore s;
  Script script = gen_long(s, spec);
  print_file(s, script, args.output);
  std::cout << "wrote " << args.output << '\n';
  return 0;
}

struct GenWallaceArgs {
  uint32_t width = 0;
  bool sat = false;
  std::string output;
};

int do_generate_wallace(const GenWallaceArgs& args) {
  TermStore s;
  Script script = gen_wallace(s, {args.width, args.sat});
  print_file(s, script, args.output);
  std::cout << "wrote " << args.output << '\n';
  return 0;
}

struct VerifyArgs {
  std::string input;
  uint32_t exhaustive_limit = 14;
  uint64_t random_trials = 1000;
  uint64_t seed = 1;
};

int do_verify(const VerifyArgs& args) {
  TermStore s;
  Script script = parse_file(s, args.input);
  TautologyOptions topts;
  topts.exhaustive_limit_bits = args.exhaustive_limit;
  topts.random_trials = args.random_trials;
  topts.seed = args.seed;

  int rc = 0;
  if (script.learned.empty()) std::cout << "no learned assertions\n";
  for (size_t i = 0; i < script.learned.size(); ++i) {
    const LearnedInfo& m = script.learned_meta[i];
    std::cout << "learned[" << i << "] " << source_name(m.source)
              << " x=" << m.x_width << " y=" << m.y_width << ": ";
    TautologyResult r = check_tautology(s, script.learned[i], topts);
    switch (r.status) {
      case TautologyStatus::Proved:
        std::cout << "Proved (" << r.assignments_checked << " assignments)\n";
        break;
      case TautologyStatus::Skipped:
        std::cout << "Skipped (" << r.note << ", " << r.assignments_checked
                  << " trials)\n";
        break;
      case TautologyStatus::Falsified:
        std::cout << "Falsified\n";
        for (const auto& [name, value] : *r.counterexample)
          std::cout << "  " << name << " = #b" << value.to_binary() << '\n';
        rc = 3;
        break;
    }
  }

  uint64_t assignments = 0;
  std::vector<TermId> raw = script.assertions;
  auto raw_status = exhaustive_sat(s, raw, args.exhaustive_limit, &assignments);
  if (!raw_status) {
    std::cout << "whole-script status: skipped (free bits exceed limit "
              << args.exhaustive_limit << ")\n";
    return rc;
  }
  std::vector<TermId> augmented = raw;
  augmented.insert(augmented.end(), script.learned.begin(),
                   script.learned.end());
  auto aug_status = exhaustive_sat(s, augmented, args.exhaustive_limit, nullptr);
  std::cout << "raw: " << (*raw_status ? "sat" : "unsat") << " ("
            << assignments << " assignments)\n";
  std::cout << "augmented: " << (*aug_status ? "sat" : "unsat") << '\n';
  if (*raw_status != *aug_status) {
    std::cout << "disagreement: learned assertions changed satisfiability\n";
    rc = 3;
  }
  return rc;
}

struct BenchArgs {
  std::vector<std::string> solvers;
  double timeout = 3600;
  std::string csv;
  std::vector<std::string> files;
  int workers = 0;
};

int do_bench(const BenchArgs& args) {
  std::vector<SolverSpec> solvers;
  for (const std::string& spec : args.solvers) {
    size_t colon = spec.find(':');
    if (colon == std::string::npos || colon == 0)
      throw InvalidSpec("solver must look like NAME:COMMAND: " + spec);
    solvers.push_back(
        {spec.substr(0, colon), spec.substr(colon + 1), args.timeout});
    if (solvers.back().command.find("{file}") == std::string::npos)
      throw InvalidSpec("solver command needs a {file} placeholder: " + spec);
  }

  std::vector<CompareInput> benchmarks;
  for (const std::string& file : args.files) {
    TermStore s;
    Script script = normalize_bool(s, parse_file(s, file));
    auto [augmented, report] = preprocess(s, script, {});
    std::string pre_path = file + ".pre.smt2";
    print_file(s, augmented, pre_path);
    std::cout << file << ": " << report.assertions_emitted
              << " learned assertions -> " << pre_path << '\n';
    benchmarks.push_back({file, file, pre_path});
  }

  std::vector<RunRecord> records =
      compare(benchmarks, solvers, {args.workers});
  write_csv(records, args.csv);
  bool all_spawn_failed = !records.empty();
  for (const RunRecord& r : records) {
    std::cout << r.benchmark << " [" << r.variant << "] " << r.solver << ": "
              << run_status_name(r.status) << " " << r.seconds << "s";
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << '\n';
    if (r.status != RunStatus::SpawnFailure) all_spawn_failed = false;
  }
  std::cout << "wrote " << args.csv << '\n';
  if (all_spawn_failed) {
    std::cerr << "error: no solver could be spawned\n";
    return 1;
  }
  return 0;
}

}  // namespace

int cli_run(int argc, const char* const* argv) {
  CLI::App app{"multiplier matching preprocessor for QF_BV formulas"};
  app.require_subcommand(1);

  PreprocessArgs pre_args;
  CLI::App* pre = app.add_subcommand(
      "preprocess", "append learned multiplication equalities to a script");
  pre->add_option("input", pre_args.input, "input .smt2 file")
      ->required()
      ->check(CLI::ExistingFile);
  pre->add_option("-o,--output", pre_args.output, "output .smt2 file")
      ->required();
  CLI::Option* lo =
      pre->add_flag("--long-only", pre_args.long_only,
                    "only match long-multiplication structure");
  CLI::Option* wo = pre->add_flag("--wallace-only", pre_args.wallace_only,
                                  "only match Wallace-tree structure");
  lo->excludes(wo);
  wo->excludes(lo);
  pre->add_flag("--allow-single-summand", pre_args.allow_single_summand,
                "treat a bare concatenation as a one-summand sum");
  pre->add_option("--backtrack-cap", pre_args.backtrack_cap,
                  "operand-recovery swap budget per array")
      ->capture_default_str();
  pre->add_flag("--match-learned,!--no-match-learned", pre_args.match_learned,
                "also scan learned assertions for matches");
  pre->add_option("--stats", pre_args.stats, "write a JSON match report here");

  CLI::App* gen = app.add_subcommand("generate", "emit benchmark scripts");
  gen->require_subcommand(1);
  GenLongArgs glong_args;
  CLI::App* glong = gen->add_subcommand(
      "long", "sum of concatenated shifted partial products");
  glong->add_option("--blocks", glong_args.blocks, "blocks per operand")
      ->required();
  glong->add_option("--block-width", glong_args.block_width, "bits per block")
      ->required();
  glong->add_option("--zero", glong_args.zeros,
                    "global block indices forced to zero (x: 1..k, y: k+1..2k)")
      ->delimiter(',');
  glong->add_option("--alias", glong_args.aliases,
                    "I=J makes block I a copy of earlier block J")
      ->delimiter(',');
  glong->add_option("--seed", glong_args.seed, "chain-packing shuffle seed")
      ->capture_default_str();
  glong->add_flag("--sat", glong_args.sat,
                  "assert the valid equality plus a value pin instead of its "
                  "negation");
  glong->add_option("-o,--output", glong_args.output, "output .smt2 file")
      ->required();

  GenWallaceArgs gwal_args;
  CLI::App* gwal =
      gen->add_subcommand("wallace", "carry-save adder network multiplier");
  gwal->add_option("--width", gwal_args.width, "operand bits")->required();
  gwal->add_flag("--sat", gwal_args.sat,
                 "assert the valid equality instead of its negation");
  gwal->add_option("-o,--output", gwal_args.output, "output .smt2 file")
      ->required();

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "oracle-check the learned assertions of a script");
  verify->add_option("input", verify_args.input, "input .smt2 file")
      ->required()
      ->check(CLI::ExistingFile);
  verify
      ->add_option("--exhaustive-limit", verify_args.exhaustive_limit,
                   "max total free bits for exhaustive enumeration")
      ->capture_default_str();
  verify
      ->add_option("--random", verify_args.random_trials,
                   "random trials above the exhaustive limit")
      ->capture_default_str();
  verify->add_option("--seed", verify_args.seed, "random-trial seed")
      ->capture_default_str();

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand(
      "bench", "run solvers on raw vs. preprocessed files, write CSV");
  bench
      ->add_option("--solver", bench_args.solvers,
                   "NAME:COMMAND with a {file} placeholder; repeatable")
      ->required();
  bench->add_option("--timeout", bench_args.timeout, "per-run seconds")
      ->capture_default_str();
  bench->add_option("--csv", bench_args.csv, "output CSV path")->required();
  bench->add_option("--workers", bench_args.workers,
                    "parallel cells (0 = host cores)");
  bench->add_option("files", bench_args.files, "benchmark .smt2 files")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (pre->parsed()) return do_preprocess(pre_args);
    if (gen->parsed()) {
      if (glong->parsed()) return do_generate_long(glong_args);
      if (gwal->parsed()) return do_generate_wallace(gwal_args);
    }
    if (verify->parsed()) return do_verify(verify_args);
    if (bench->parsed()) return do_bench(bench_args);
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace mulmatch
