#include "mulmatch/match_long.hpp"

#include <algorithm>

namespace mulmatch {

std::vector<uint32_t> infer_block_widths(
    const TermStore& s, const std::vector<ConcatChain>& chains) {
  std::vector<uint32_t> widths;
  for (const ConcatChain& chain : chains)
    for (TermId seg : chain.segments)
      if (auto pp = match_partial_product(s, seg))
        widths.push_back(pp->operand_width);
  std::sort(widths.begin(), widths.end());
  widths.erase(std::unique(widths.begin(), widths.end()), widths.end());
  return widths;
}

// Collects the partial products of all chains into one array, aligning each
// product by the bits below it. Zero constants of any width are skipped;
// anything else rejects this block width.
static std::optional<PPArray> build_pp_array(
    const TermStore& s, const std::vector<ConcatChain>& chains, uint32_t w) {
  PPArray lambda;
  lambda.block_width = w;
  for (const ConcatChain& chain : chains) {
    uint64_t bits_below = 0;
    for (auto it = chain.segments.rbegin(); it != chain.segments.rend();
         ++it) {
      TermId seg = *it;
      if (is_zero_const(s, seg)) {
        bits_below += s.width(seg);
        continue;
      }
      auto pp = match_partial_product(s, seg);
      if (!pp || pp->operand_width != w) return std::nullopt;
      if (bits_below % w != 0) return std::nullopt;
      int offset = static_cast<int>(bits_below / w) + 1;
      lambda.insert(offset, PartialProduct(pp->a, pp->b, w));
      // a factorable column i never holds more than i products
      if (multiset_total(lambda.slots[offset]) > offset) return std::nullopt;
      bits_below += s.width(seg);
    }
  }
  return lambda;
}

LongMatchResult match_long(TermStore& s, TermId t, const LongOptions& opts) {
  LongMatchResult res;
  if (s.is_bool(t)) return res;
  std::vector<ConcatChain> chains;
  if (s.kind(t) == Kind::BvAdd) {
    SumChain sum = flatten_add(s, t);
    chains.reserve(sum.summands.size());
    for (TermId u : sum.summands) chains.push_back(flatten_concat(s, u));
  } else if (opts.allow_single_summand && s.kind(t) == Kind::Concat) {
    chains.push_back(flatten_concat(s, t));
  } else {
    return res;
  }
  for (uint32_t w : infer_block_widths(s, chains)) {
    LongWidthTrace trace;
    trace.block_width = w;
    if (auto lambda = build_pp_array(s, chains, w)) {
      trace.segments_ok = true;
      trace.lambda = std::move(*lambda);
      if (!trace.lambda.empty()) {
        trace.recovery = get_mult_operands(s, trace.lambda, MatchSource::Long,
                                           t, opts.recovery);
        res.matches.insert(res.matches.end(), trace.recovery.matches.begin(),
                           trace.recovery.matches.end());
      }
    }
    res.traces.push_back(std::move(trace));
  }
  return res;
}

}  // namespace mulmatch
