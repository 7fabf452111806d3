#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mulmatch/bitvec.hpp"
#include "mulmatch/partial_products.hpp"
#include "mulmatch/term.hpp"

namespace mulmatch {

// variable name -> value; widths must match the variable sort
using Assignment = std::map<std::string, BitVec>;

// free variables under root, sorted by name
std::vector<TermId> free_vars(const TermStore& s, TermId root);

// Evaluates t; Boolean terms yield width-1 values (1 = true).
// Throws UnboundVariable if the assignment misses a variable.
BitVec eval(const TermStore& s, TermId t, const Assignment& a);

// Reusable bottom-up evaluator over a fixed set of roots; avoids re-walking
// the DAG per assignment inside enumeration loops.
class Evaluator {
 public:
  Evaluator(const TermStore& s, std::vector<TermId> roots);
  // values for vars are taken positionally from `values`, matching vars()
  void run(const std::vector<BitVec>& values);
  const std::vector<TermId>& vars() const { return vars_; }
  const BitVec& value(TermId t) const { return memo_[t.value]; }

 private:
  const TermStore& store_;
  std::vector<TermId> order_;  // topological, children first
  std::vector<TermId> vars_;   // sorted by name
  std::vector<BitVec> memo_;
};

enum class TautologyStatus { Proved, Falsified, Skipped };

struct TautologyResult {
  TautologyStatus status;
  // set when Falsified
  std::optional<Assignment> counterexample;
  // Proved: number of assignments enumerated; Skipped: random trials run
  uint64_t assignments_checked = 0;
  std::string note;  // e.g. "randomly vetted only"
};

struct TautologyOptions {
  uint32_t exhaustive_limit_bits = 14;
  uint64_t random_trials = 1000;
  uint64_t seed = 1;
};

// Checks an Eq-rooted term for validity. Exhaustive iff the total free
// bits fit the limit; otherwise runs seeded random trials and reports
// Skipped when none falsifies. The first counterexample in enumeration
// order wins (variables sorted by name, first variable in the low bits).
TautologyResult check_tautology(const TermStore& s, TermId eq,
                                const TautologyOptions& opts = {});

// Recomputes the partial-product array of a match from its operand blocks
// (x_j * y_k lands in slot j+k-1; zero blocks contribute nothing) and
// compares multisets slot by slot; also checks that the highest non-zero
// product does not land above the array's top slot.
bool check_pp_array(const TermStore& s, const Match& m, const PPArray& lambda);

}  // namespace mulmatch
