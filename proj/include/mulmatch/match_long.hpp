#pragma once

#include "mulmatch/operand_recovery.hpp"

namespace mulmatch {

struct LongOptions {
  // accept a bare concatenation as a degenerate one-summand sum
  bool allow_single_summand = false;
  RecoveryOptions recovery;
};

// diagnostics for one candidate block width
struct LongWidthTrace {
  uint32_t block_width = 0;
  // false when some segment is neither a zero constant nor a partial
  // product of this width, or a product is misaligned
  bool segments_ok = false;
  PPArray lambda;
  RecoveryResult recovery;
};

struct LongMatchResult {
  std::vector<Match> matches;  // union over the candidate block widths
  std::vector<LongWidthTrace> traces;
};

// distinct operand widths of partial-product segments found in the chains
std::vector<uint32_t> infer_block_widths(const TermStore& s,
                                         const std::vector<ConcatChain>& chains);

// Recognizes t as a sum of concatenation chains of shifted partial
// products and recovers the multiplication operands. Every candidate block
// width is tried; results are unioned (a match records its own width).
LongMatchResult match_long(TermStore& s, TermId t, const LongOptions& opts = {});

}  // namespace mulmatch
