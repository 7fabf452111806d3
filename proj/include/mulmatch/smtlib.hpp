#pragma once

#include <string>
#include <vector>

#include "mulmatch/partial_products.hpp"
#include "mulmatch/term.hpp"

namespace mulmatch {

struct Declaration {
  std::string name;
  uint32_t width = 0;  // 1 for Boolean
  bool boolean = false;
};

// provenance of a learned assertion, carried in a comment line so that
// re-parsing an augmented file keeps the original/learned split
struct LearnedInfo {
  MatchSource source = MatchSource::Long;
  uint32_t x_width = 0, y_width = 0;
};

struct Script {
  std::string logic;                 // empty when the input had no set-logic
  std::vector<std::string> prelude;  // set-info/set-option lines, verbatim
  std::vector<Declaration> declarations;
  std::vector<TermId> assertions;  // original assertions
  std::vector<TermId> learned;     // appended tautologies
  std::vector<LearnedInfo> learned_meta;  // parallel to learned
  bool has_check_sat = false;
  bool has_exit = false;
};

// Parses the QF_BV subset: set-logic, set-info/set-option (preserved),
// declare-fun (zero arity) / declare-const, assert, check-sat, exit; terms
// over bvadd/bvmul/bvand/bvor/bvxor/bvnot/concat/extract/=/not/and/or/xor,
// binary, hex, and (_ bvN w) literals, and let bindings (expanded by DAG
// reference, sharing preserved). Throws ParseError or UnsupportedFeature.
Script parse(TermStore& s, const std::string& text);
Script parse_file(TermStore& s, const std::string& path);

// Emits SMT-LIB2: prelude, declarations, original assertions, learned
// assertions (each preceded by a provenance comment), check-sat/exit.
// Subterms with fan-out > 1 are let-bound under collision-free names, so
// parse(print(s)) re-interns to id-equal assertion terms.
std::string print(const TermStore& s, const Script& script);
void print_file(const TermStore& s, const Script& script,
                const std::string& path);

// Rewrites Boolean and/or/xor/not whose leaves are (= b #b1) atoms over
// width-1 terms into the corresponding width-1 bit-vector gates compared
// to #b1. Everything else is untouched; satisfiability is preserved.
Script normalize_bool(TermStore& s, const Script& script);

}  // namespace mulmatch
