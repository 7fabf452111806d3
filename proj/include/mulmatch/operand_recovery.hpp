#pragma once

#include <optional>
#include <vector>

#include "mulmatch/partial_products.hpp"

namespace mulmatch {

struct RecoveryOptions {
  // maximum number of backtrack swaps before giving up on an array
  int backtrack_cap = 4096;
};

struct RecoveryResult {
  std::vector<Match> matches;
  bool budget_exhausted = false;
  int swaps = 0;
};

// Reconstructs the operand block vectors of a multiplication from its
// partial-product array. Walks the columns top down, explaining each column
// as the products of already-fixed blocks plus at most two new extremal
// products; ambiguous columns record an alternate assignment that a
// backtracking pass revisits. Every emitted match reproduces `lambda`
// exactly (see check_pp_array). Empty result if the array cannot be
// explained; partial results plus budget_exhausted = true if the swap cap
// is reached.
RecoveryResult get_mult_operands(TermStore& s, const PPArray& lambda,
                                 MatchSource source, TermId target,
                                 const RecoveryOptions& opts = {});

// Shifts a block vector (least-significant first, nullopt = zero block)
// right until exactly `target_trailing` zero blocks remain below the lowest
// non-zero block, padding the top with zeros. The vector must already have
// at least that many trailing zeros.
std::vector<std::optional<TermId>> shift_to_trailing_zero_blocks(
    std::vector<std::optional<TermId>> blocks, int target_trailing);

}  // namespace mulmatch
