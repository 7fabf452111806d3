#pragma once

#include <map>
#include <vector>

#include "mulmatch/term.hpp"

namespace mulmatch {

// Unordered pair of operand terms of one block multiplication.
struct PartialProduct {
  PartialProduct(TermId x, TermId y, uint32_t w)
      : a(x < y ? x : y), b(x < y ? y : x), width(w) {}
  TermId a, b;  // a <= b
  uint32_t width;
  friend auto operator<=>(const PartialProduct&, const PartialProduct&) =
      default;
  bool contains(TermId t) const { return a == t || b == t; }
  // the operand paired with t; for a square both operands equal t
  TermId other(TermId t) const { return a == t ? b : a; }
};

// counted multiset
using PPMultiset = std::map<PartialProduct, int>;

int multiset_total(const PPMultiset& m);
bool multiset_contains(const PPMultiset& m, const PartialProduct& p);
// removes one occurrence; returns false if absent
bool multiset_remove_one(PPMultiset& m, const PartialProduct& p);
void multiset_add(PPMultiset& m, const PartialProduct& p, int count = 1);

// Partial products grouped by alignment: slot i holds the products whose
// low block sits i-1 blocks above the least-significant end. 1-indexed;
// only non-empty slots are stored.
struct PPArray {
  uint32_t block_width = 0;
  std::map<int, PPMultiset> slots;

  void insert(int index, const PartialProduct& p) {
    multiset_add(slots[index], p);
  }
  bool empty() const { return slots.empty(); }
  int lowest() const { return slots.begin()->first; }
  int highest() const { return slots.rbegin()->first; }
  int total() const;
  // necessary condition on a factorable array: slot i holds at most
  // min(i, h-i+1) products
  bool column_shape_ok() const;
  friend bool operator==(const PPArray&, const PPArray&) = default;
};

enum class MatchSource { Long, Wallace };

// A recovered multiplication: target evaluates to the product of the two
// block vectors. Blocks are least-significant first; zero blocks are
// materialized zero constants. Both vectors have the same length and the
// (x, y) pair is unordered.
struct Match {
  std::vector<TermId> x_blocks, y_blocks;
  uint32_t block_width = 0;
  MatchSource source = MatchSource::Long;
  TermId target;
};

// operand as a single term: blocks concatenated most-significant first,
// adjacent zero blocks coalesced into one constant
TermId assemble_blocks(TermStore& s, const std::vector<TermId>& blocks_lsb,
                       uint32_t block_width);

}  // namespace mulmatch
