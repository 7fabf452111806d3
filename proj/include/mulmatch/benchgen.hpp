#pragma once

#include <cstdint>
#include <vector>

#include "mulmatch/smtlib.hpp"

namespace mulmatch {

enum class BlockTag { Fresh, Zero, Alias };

struct BlockPattern {
  BlockTag tag = BlockTag::Fresh;
  // 1-based global block index (x blocks 1..k least-significant first,
  // then y blocks k+1..2k); must be smaller than the block's own index
  int alias_of = 0;
};

struct LongSpec {
  int blocks = 2;  // blocks per operand
  uint32_t block_width = 1;
  // least-significant first, one entry per block; empty = all fresh
  std::vector<BlockPattern> x_pattern, y_pattern;
  uint64_t seed = 0;
  // true: assert the (valid) equality plus a value pin; false: assert its
  // negation, which is unsatisfiable
  bool satisfiable = false;
};

// A sum of concatenation chains of shifted partial products, equated to the
// wide product of the assembled operands. Fresh x blocks are named v1, v2,
// ... and fresh y blocks u1, u2, ...; products are packed into chains
// greedily in a seed-shuffled order. Throws InvalidSpec on malformed
// patterns or an all-zero operand.
Script gen_long(TermStore& s, const LongSpec& spec);

struct WallaceSpec {
  uint32_t width = 2;  // operand bits
  bool satisfiable = false;
};

// A carry-save adder network over the bit products of two fresh operand
// variables x and y, reduced column by column with full and half adders,
// equated to the wide product bvmul of x and y.
Script gen_wallace(TermStore& s, const WallaceSpec& spec);

}  // namespace mulmatch
