#include "mulmatch/harness.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

#include "mulmatch/errors.hpp"

namespace mulmatch {

const char* run_status_name(RunStatus st) {
  switch (st) {
    case RunStatus::Sat: return "sat";
    case RunStatus::Unsat: return "unsat";
    case RunStatus::Unknown: return "unknown";
    case RunStatus::Timeout: return "timeout";
    case RunStatus::Error: return "error";
    case RunStatus::SpawnFailure: return "spawn-failure";
  }
  return "error";
}

namespace {

constexpr size_t kOutputCap = 1 << 20;

std::vector<std::string> build_argv(const SolverSpec& spec,
                                    const std::string& file) {
  size_t holes = 0;
  for (size_t pos = spec.command.find("{file}"); pos != std::string::npos;
       pos = spec.command.find("{file}", pos + 1))
    ++holes;
  if (holes != 1)
    throw InvalidSpec("solver command needs exactly one {file} placeholder: " +
                      spec.command);
  std::string cmd = spec.command;
  cmd.replace(cmd.find("{file}"), 6, file);
  std::vector<std::string> argv;
  std::istringstream in(cmd);
  for (std::string tok; in >> tok;) argv.push_back(tok);
  if (argv.empty()) throw InvalidSpec("empty solver command");
  return argv;
}

std::optional<RunStatus> scan_verdict(const std::string& output) {
  std::istringstream in(output);
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line == "sat") return RunStatus::Sat;
    if (line == "unsat") return RunStatus::Unsat;
    if (line == "unknown") return RunStatus::Unknown;
  }
  return std::nullopt;
}

}  // namespace

RunRecord run_solver(const SolverSpec& spec, const std::string& file) {
  RunRecord rec;
  rec.solver = spec.name;
  std::vector<std::string> argv = build_argv(spec, file);

  int out_pipe[2], err_pipe[2];  // err_pipe reports exec failure via CLOEXEC
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
    throw Error(std::string("pipe: ") + std::strerror(errno));
  fcntl(err_pipe[1], F_SETFD, FD_CLOEXEC);

  // built before fork: the child must not allocate (other threads may hold
  // the allocator lock at fork time)
  std::vector<char*> cargv;
  for (std::string& a : argv) cargv.push_back(a.data());
  cargv.push_back(nullptr);

  auto start = std::chrono::steady_clock::now();
  pid_t pid = fork();
  if (pid < 0) throw Error(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    setpgid(0, 0);  // own process group so the killer reaches grandchildren
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(out_pipe[1], STDERR_FILENO);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    execvp(cargv[0], cargv.data());
    int err = errno;
    ssize_t ignored = write(err_pipe[1], &err, sizeof(err));
    (void)ignored;
    _exit(127);
  }
  close(out_pipe[1]);
  close(err_pipe[1]);

  std::string output;
  bool timed_out = false;
  auto deadline =
      start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  std::chrono::duration<double>(spec.timeout_seconds));
  char buf[4096];
  while (true) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      timed_out = true;
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      break;
    }
    int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count());
    struct pollfd pfd {out_pipe[0], POLLIN, 0};
    int rc = poll(&pfd, 1, std::max(wait_ms, 1));
    if (rc == 0) continue;  // deadline check at loop head
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    ssize_t n = read(out_pipe[0], buf, sizeof(buf));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;  // EOF or error: child closed its end
    if (output.size() < kOutputCap)
      output.append(buf, static_cast<size_t>(
                             std::min<ssize_t>(n, kOutputCap - output.size())));
  }
  close(out_pipe[0]);

  int exec_errno = 0;
  ssize_t got = read(err_pipe[0], &exec_errno, sizeof(exec_errno));
  close(err_pipe[0]);

  int wstatus = 0;
  waitpid(pid, &wstatus, 0);
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();

  if (got == sizeof(exec_errno)) {
    rec.status = RunStatus::SpawnFailure;
    rec.detail = argv[0] + std::string(": ") + std::strerror(exec_errno);
    return rec;
  }
  if (timed_out) {
    rec.status = RunStatus::Timeout;
    return rec;
  }
  if (auto verdict = scan_verdict(output)) {
    rec.status = *verdict;
    return rec;
  }
  rec.status = RunStatus::Error;
  rec.detail = output.substr(0, 500);
  return rec;
}

std::vector<RunRecord> compare(const std::vector<CompareInput>& benchmarks,
                               const std::vector<SolverSpec>& solvers,
                               const CompareOptions& opts) {
  struct Cell {
    const CompareInput* bench;
    const SolverSpec* solver;
    const char* variant;
    const std::string* path;
  };
  std::vector<Cell> cells;
  for (const CompareInput& b : benchmarks) {
    cells.push_back({&b, nullptr, "raw", &b.raw_path});
    cells.push_back({&b, nullptr, "preprocessed", &b.preprocessed_path});
  }
  // expand solvers within each (benchmark, variant)
  std::vector<Cell> expanded;
  for (const Cell& c : cells)
    for (const SolverSpec& s : solvers)
      expanded.push_back({c.bench, &s, c.variant, c.path});

  std::vector<RunRecord> records(expanded.size());
  std::atomic<size_t> next{0};
  size_t workers = opts.workers > 0
                       ? static_cast<size_t>(opts.workers)
                       : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<size_t>(expanded.size(), 1));
  auto work = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= expanded.size()) return;
      const Cell& c = expanded[i];
      RunRecord rec = run_solver(*c.solver, *c.path);
      rec.benchmark = c.bench->id;
      rec.variant = c.variant;
      records[i] = std::move(rec);
    }
  };
  std::vector<std::thread> pool;
  for (size_t i = 0; i < workers; ++i) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  return records;
}

namespace {

int status_rank(RunStatus st) {
  switch (st) {
    case RunStatus::Sat:
    case RunStatus::Unsat: return 0;
    case RunStatus::Unknown: return 1;
    case RunStatus::Timeout: return 2;
    case RunStatus::Error: return 3;
    case RunStatus::SpawnFailure: return 4;
  }
  return 4;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void csv_row(std::ostream& out, const RunRecord& r) {
  out << csv_field(r.benchmark) << ',' << r.variant << ','
      << csv_field(r.solver) << ',' << run_status_name(r.status) << ','
      << std::fixed << std::setprecision(3) << r.seconds << '\n';
}

}  // namespace

std::string to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << "benchmark,variant,solver,verdict,seconds\n";
  // records arrive grouped by (benchmark, variant); emit each group followed
  // by its portfolio row
  size_t i = 0;
  while (i < records.size()) {
    size_t j = i;
    const RunRecord* best = &records[i];
    while (j < records.size() && records[j].benchmark == records[i].benchmark &&
           records[j].variant == records[i].variant) {
      const RunRecord& r = records[j];
      csv_row(out, r);
      if (status_rank(r.status) < status_rank(best->status) ||
          (status_rank(r.status) == status_rank(best->status) &&
           r.seconds < best->seconds))
        best = &r;
      ++j;
    }
    RunRecord portfolio = *best;
    portfolio.solver = "portfolio";
    csv_row(out, portfolio);
    i = j;
  }
  return out.str();
}

void write_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << to_csv(records);
}

}  // namespace mulmatch
