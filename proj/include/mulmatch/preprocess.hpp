#pragma once

#include <utility>
#include <vector>

#include "mulmatch/match_long.hpp"
#include "mulmatch/match_wallace.hpp"
#include "mulmatch/smtlib.hpp"

namespace mulmatch {

struct PreprocessOptions {
  bool long_enabled = true;
  bool wallace_enabled = true;
  bool allow_single_summand = false;
  int backtrack_cap = 4096;
  // also scan assertions that are themselves learned (off: second runs
  // are no-ops by construction)
  bool match_learned = false;
};

// one matched subterm at one block width, with every recovered factorization
struct MatchEntry {
  TermId target;
  MatchSource source = MatchSource::Long;
  uint32_t block_width = 0;
  uint32_t x_width = 0, y_width = 0;  // widths of the assembled operands
  std::vector<Match> candidates;
};

struct MatchReport {
  std::vector<MatchEntry> entries;
  size_t subterms_scanned = 0;
  size_t matches_found = 0;  // candidates over all entries, pre-dedup
  size_t assertions_emitted = 0;
  size_t duplicates_suppressed = 0;  // matches_found - assertions_emitted
  size_t backtrack_budget_hits = 0;
  double wall_seconds = 0.0;
};

// (= (bvmul X Y) T) with X, Y the assembled operands and all three sides
// zero-extended to the width that fits both the full product and the target
TermId build_tautology(TermStore& s, const Match& m);

// Scans every distinct subterm of the original assertions (plus the learned
// ones when match_learned) for decomposed multiplications, in assertion
// order and preorder within each assertion, and appends one learned
// equality per distinct recovered factorization. Assertions already in the
// script are suppressed, so preprocessing an augmented script again adds
// nothing.
std::pair<Script, MatchReport> preprocess(TermStore& s, const Script& script,
                                          const PreprocessOptions& opts = {});

}  // namespace mulmatch
