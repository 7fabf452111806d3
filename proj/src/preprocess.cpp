#include "mulmatch/preprocess.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

namespace mulmatch {

TermId build_tautology(TermStore& s, const Match& m) {
  TermId x = assemble_blocks(s, m.x_blocks, m.block_width);
  TermId y = assemble_blocks(s, m.y_blocks, m.block_width);
  uint32_t wide = std::max(s.width(x) + s.width(y), s.width(m.target));
  return s.eq(s.bv_mul(zero_ext(s, x, wide), zero_ext(s, y, wide)),
              zero_ext(s, m.target, wide));
}

namespace {

void add_entry(MatchReport& report, TermId target, MatchSource source,
               uint32_t block_width, std::vector<Match> candidates) {
  if (candidates.empty()) return;
  MatchEntry e;
  e.target = target;
  e.source = source;
  e.block_width = block_width;
  e.x_width = static_cast<uint32_t>(candidates[0].x_blocks.size()) * block_width;
  e.y_width = static_cast<uint32_t>(candidates[0].y_blocks.size()) * block_width;
  report.matches_found += candidates.size();
  e.candidates = std::move(candidates);
  report.entries.push_back(std::move(e));
}

}  // namespace

std::pair<Script, MatchReport> preprocess(TermStore& s, const Script& script,
                                          const PreprocessOptions& opts) {
  auto start = std::chrono::steady_clock::now();
  Script out = script;
  MatchReport report;

  // assertions already present never get a learned duplicate
  std::set<TermId> existing(script.assertions.begin(),
                            script.assertions.end());
  existing.insert(script.learned.begin(), script.learned.end());

  LongOptions lopts;
  lopts.allow_single_summand = opts.allow_single_summand;
  lopts.recovery.backtrack_cap = opts.backtrack_cap;
  RecoveryOptions wopts;
  wopts.backtrack_cap = opts.backtrack_cap;

  std::vector<TermId> roots = script.assertions;
  if (opts.match_learned)
    roots.insert(roots.end(), script.learned.begin(), script.learned.end());

  std::set<TermId> seen;
  for (TermId root : roots) {
    for (TermId t : subterms(s, root)) {
      if (!seen.insert(t).second) continue;
      ++report.subterms_scanned;
      if (s.is_bool(t)) continue;
      if (opts.long_enabled) {
        LongMatchResult r = match_long(s, t, lopts);
        for (const LongWidthTrace& tr : r.traces)
          if (tr.recovery.budget_exhausted) ++report.backtrack_budget_hits;
        std::map<uint32_t, std::vector<Match>> by_width;
        for (Match& m : r.matches)
          by_width[m.block_width].push_back(std::move(m));
        for (auto& [w, ms] : by_width)
          add_entry(report, t, MatchSource::Long, w, std::move(ms));
      }
      if (opts.wallace_enabled) {
        WallaceMatchResult r = match_wallace(s, t, wopts);
        if (r.recovery.budget_exhausted) ++report.backtrack_budget_hits;
        add_entry(report, t, MatchSource::Wallace, 1, std::move(r.matches));
      }
    }
  }

  for (const MatchEntry& e : report.entries) {
    for (const Match& m : e.candidates) {
      TermId taut = build_tautology(s, m);
      if (!existing.insert(taut).second) {
        ++report.duplicates_suppressed;
        continue;
      }
      out.learned.push_back(taut);
      out.learned_meta.push_back({e.source, e.x_width, e.y_width});
      ++report.assertions_emitted;
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return {std::move(out), report};
}

}  // namespace mulmatch
