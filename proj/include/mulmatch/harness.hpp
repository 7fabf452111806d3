#pragma once

#include <string>
#include <vector>

namespace mulmatch {

struct SolverSpec {
  std::string name;
  // argv template, whitespace-split; exactly one token contains {file}
  std::string command;
  double timeout_seconds = 3600;
};

enum class RunStatus { Sat, Unsat, Unknown, Timeout, Error, SpawnFailure };
const char* run_status_name(RunStatus st);

struct RunRecord {
  std::string benchmark;
  std::string solver;
  std::string variant;  // "raw" or "preprocessed"
  RunStatus status = RunStatus::Error;
  double seconds = 0.0;
  std::string detail;  // captured output on error, reason on spawn failure
};

// Runs one solver on one file in a child process, killing it at the
// timeout. The verdict is the first output line that is exactly sat,
// unsat, or unknown; any run that produces none is an error. A missing
// binary is SpawnFailure, recorded rather than thrown.
RunRecord run_solver(const SolverSpec& spec, const std::string& file);

// one benchmark = the raw file and its preprocessed twin
struct CompareInput {
  std::string id;
  std::string raw_path;
  std::string preprocessed_path;
};

struct CompareOptions {
  int workers = 0;  // 0 = hardware concurrency
};

// Every (benchmark, variant, solver) cell, run on a bounded worker pool,
// returned in deterministic benchmark/variant/solver order.
std::vector<RunRecord> compare(const std::vector<CompareInput>& benchmarks,
                               const std::vector<SolverSpec>& solvers,
                               const CompareOptions& opts = {});

// CSV with header benchmark,variant,solver,verdict,seconds; after each
// (benchmark, variant) group one synthetic "portfolio" row carries the best
// cell (decided beats unknown beats timeout beats failures; ties by time).
std::string to_csv(const std::vector<RunRecord>& records);
void write_csv(const std::vector<RunRecord>& records, const std::string& path);

}  // namespace mulmatch
