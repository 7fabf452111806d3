#pragma once

#include "mulmatch/operand_recovery.hpp"

namespace mulmatch {

// unordered triple of full-adder inputs
struct CarryFullParts {
  TermId a, b, c;
};

// unordered pair of half-adder inputs
struct CarryHalfParts {
  TermId a, b;
};

// Recognizes (a AND b) OR (b AND c) OR (c AND a) under any or-nesting and
// conjunct order. Requires exactly three conjunctions whose operand pairs
// are the three sides of a triangle over distinct {a, b, c}.
std::optional<CarryFullParts> match_carry_full(const TermStore& s, TermId u);

// Recognizes a AND b at width 1. The shape is identical to a bit product;
// match_wallace disambiguates by frontier membership.
std::optional<CarryHalfParts> match_carry_half(const TermStore& s, TermId u);

struct WallaceMatchResult {
  std::vector<Match> matches;
  // term parsed as a complete adder network with consistent carry usage
  bool structure_ok = false;
  PPArray lambda;
  RecoveryResult recovery;
};

// Recognizes t, a concatenation of width-1 segments, as the output of a
// Wallace-tree multiplier. Walks output bits from the least significant
// end, peeling xor trees one level at a time and consuming each adder's
// carry against the previous bit's frontier; bare conjunctions become
// partial products. Operand recovery runs on the collected products with
// block width 1.
WallaceMatchResult match_wallace(TermStore& s, TermId t,
                                 const RecoveryOptions& opts = {});

}  // namespace mulmatch
