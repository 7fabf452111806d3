#include "mulmatch/operand_recovery.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace mulmatch {

int multiset_total(const PPMultiset& m) {
  int t = 0;
  for (const auto& [p, c] : m) t += c;
  return t;
}

bool multiset_contains(const PPMultiset& m, const PartialProduct& p) {
  auto it = m.find(p);
  return it != m.end() && it->second > 0;
}

bool multiset_remove_one(PPMultiset& m, const PartialProduct& p) {
  auto it = m.find(p);
  if (it == m.end()) return false;
  if (--it->second == 0) m.erase(it);
  return true;
}

void multiset_add(PPMultiset& m, const PartialProduct& p, int count) {
  m[p] += count;
}

int PPArray::total() const {
  int t = 0;
  for (const auto& [i, ms] : slots) t += multiset_total(ms);
  return t;
}

bool PPArray::column_shape_ok() const {
  if (slots.empty()) return true;
  int h = highest();
  for (const auto& [i, ms] : slots) {
    if (i < 1) return false;
    if (multiset_total(ms) > std::min(i, h - i + 1)) return false;
  }
  return true;
}

TermId assemble_blocks(TermStore& s, const std::vector<TermId>& blocks_lsb,
                       uint32_t block_width) {
  assert(!blocks_lsb.empty());
  // segments most-significant first, runs of zero blocks coalesced
  std::vector<TermId> segs;
  size_t i = blocks_lsb.size();
  while (i > 0) {
    if (is_zero_const(s, blocks_lsb[i - 1])) {
      uint32_t zw = 0;
      while (i > 0 && is_zero_const(s, blocks_lsb[i - 1])) {
        zw += s.width(blocks_lsb[i - 1]);
        --i;
      }
      segs.push_back(s.zero(zw));
    } else {
      assert(s.width(blocks_lsb[i - 1]) == block_width);
      segs.push_back(blocks_lsb[i - 1]);
      --i;
    }
  }
  // a leading zero run wraps the rest as one zero-extension
  size_t core_start = 0;
  std::optional<TermId> lead;
  if (segs.size() > 1 && is_zero_const(s, segs[0])) {
    lead = segs[0];
    core_start = 1;
  }
  TermId acc = segs[core_start];
  for (size_t j = core_start + 1; j < segs.size(); ++j)
    acc = s.concat(acc, segs[j]);
  return lead ? s.concat(*lead, acc) : acc;
}

std::vector<std::optional<TermId>> shift_to_trailing_zero_blocks(
    std::vector<std::optional<TermId>> blocks, int target_trailing) {
  int trailing = 0;
  while (trailing < static_cast<int>(blocks.size()) && !blocks[trailing])
    ++trailing;
  assert(trailing >= target_trailing);
  int shift = trailing - target_trailing;
  blocks.erase(blocks.begin(), blocks.begin() + shift);
  blocks.insert(blocks.end(), shift, std::nullopt);
  return blocks;
}

namespace {

using OptBlock = std::optional<TermId>;

struct RecoveryState {
  int h = 0;
  uint32_t w = 0;
  // 1-indexed candidate blocks; nullopt marks a zero block
  std::vector<OptBlock> x, y;
  std::vector<bool> flag;                          // column has an alternate
  std::vector<std::pair<OptBlock, OptBlock>> alt;  // assignment to revisit
  int l_x = 0, l_y = 0;  // lowest non-zero assigned block per operand
};

// extremal products a fresh (x_i, y_i) assignment adds to column i
PPMultiset implied_residue(TermId xh, TermId yh, const OptBlock& xi,
                           const OptBlock& yi, uint32_t w) {
  PPMultiset implied;
  if (yi) multiset_add(implied, PartialProduct(xh, *yi, w));
  if (xi) multiset_add(implied, PartialProduct(*xi, yh, w));
  return implied;
}

}  // namespace

RecoveryResult get_mult_operands(TermStore& s, const PPArray& lambda,
                                 MatchSource source, TermId target,
                                 const RecoveryOptions& opts) {
  RecoveryResult res;
  if (lambda.empty() || !lambda.column_shape_ok()) return res;
  const int l = lambda.lowest();
  const int h = lambda.highest();
  const uint32_t w = lambda.block_width;
  if (l < 1) return res;
  const PPMultiset& top = lambda.slots.at(h);
  if (multiset_total(top) != 1) return res;

  RecoveryState st;
  st.h = h;
  st.w = w;
  st.x.assign(h + 1, std::nullopt);
  st.y.assign(h + 1, std::nullopt);
  st.flag.assign(h + 1, false);
  st.alt.assign(h + 1, {std::nullopt, std::nullopt});
  const PartialProduct seed = top.begin()->first;
  st.x[h] = seed.a;  // stored pair is id-ordered, so seeding is deterministic
  st.y[h] = seed.b;
  st.l_x = st.l_y = h;
  const TermId xh = seed.a, yh = seed.b;

  std::set<std::pair<std::vector<TermId>, std::vector<TermId>>> emitted;
  auto materialize = [&](const std::vector<OptBlock>& blocks) {
    std::vector<TermId> out;
    out.reserve(blocks.size());
    for (const OptBlock& b : blocks) out.push_back(b ? *b : s.zero(w));
    return out;
  };
  auto emit = [&]() {
    std::vector<OptBlock> xb(st.x.begin() + 1, st.x.end());
    std::vector<OptBlock> yb(st.y.begin() + 1, st.y.end());
    for (int o = 0; o <= l - 1; ++o) {
      std::vector<TermId> xs =
          materialize(shift_to_trailing_zero_blocks(xb, o));
      std::vector<TermId> ys =
          materialize(shift_to_trailing_zero_blocks(yb, l - 1 - o));
      auto key = xs <= ys ? std::make_pair(xs, ys) : std::make_pair(ys, xs);
      if (!emitted.insert(key).second) continue;
      Match m;
      m.x_blocks = std::move(xs);
      m.y_blocks = std::move(ys);
      m.block_width = w;
      m.source = source;
      m.target = target;
      res.matches.push_back(std::move(m));
    }
  };

  if (h == 1) {
    emit();
    return res;
  }

  int i = h;
  while (true) {
    bool fail = false;
    {
      --i;
      PPMultiset C;
      if (auto it = lambda.slots.find(i); it != lambda.slots.end())
        C = it->second;
      // interior products of already-fixed blocks must account for their
      // share of the column
      for (int j = h - 1; j >= i + 1 && !fail; --j) {
        int partner = h + i - j;
        if (st.x[j] && st.y[partner]) {
          if (!multiset_remove_one(C, PartialProduct(*st.x[j], *st.y[partner], w)))
            fail = true;
        }
      }
      if (!fail) {
        // the residue is explained by the new extremal blocks (x_i, y_i)
        OptBlock nx, ny;
        bool ambiguous = false;
        std::pair<OptBlock, OptBlock> alternate{std::nullopt, std::nullopt};
        bool matched = false;
        int csize = multiset_total(C);
        if (csize == 2) {
          std::vector<PartialProduct> elems;
          for (const auto& [p, c] : C)
            for (int n = 0; n < c; ++n) elems.push_back(p);
          for (int pick = 0; pick < 2 && !matched; ++pick) {
            const PartialProduct& ex = elems[pick];      // x_h * y_i
            const PartialProduct& ey = elems[1 - pick];  // x_i * y_h
            if (ex.contains(xh) && ey.contains(yh)) {
              ny = ex.other(xh);
              nx = ey.other(yh);
              ambiguous = (xh == yh);
              alternate = {ny, nx};
              matched = true;
            }
          }
        } else if (csize == 1) {
          const PartialProduct e = C.begin()->first;
          if (e == PartialProduct(xh, yh, w)) {
            // either x_i = 0 with y_i = y_h, or the mirror image
            nx = std::nullopt;
            ny = yh;
            ambiguous = true;
            alternate = {xh, std::nullopt};
            matched = true;
          } else if (e.contains(xh)) {
            nx = std::nullopt;
            ny = e.other(xh);
            ambiguous = (xh == yh);
            alternate = {ny, nx};
            matched = true;
          } else if (e.contains(yh)) {
            nx = e.other(yh);
            ny = std::nullopt;
            ambiguous = false;
            matched = true;
          }
        } else if (csize == 0) {
          nx = ny = std::nullopt;
          matched = true;
        }
        if (!matched) {
          fail = true;
        } else {
          assert(implied_residue(xh, yh, nx, ny, w) == C);
          st.x[i] = nx;
          st.y[i] = ny;
          st.flag[i] = ambiguous;
          st.alt[i] = alternate;
          if (nx) st.l_x = i;
          if (ny) st.l_y = i;
          // the lowest product of the candidate operands must not fall
          // below the array
          if (st.l_x + st.l_y - h < 1) fail = true;
        }
      }
      if (!fail) {
        if (i > 1) continue;
        emit();  // reached the bottom; enumerate shifts, then backtrack
      }
    }
    // backtrack: revisit the lowest flagged column above i
    int revisit = -1;
    for (int j = i + 1; j <= h; ++j)
      if (st.flag[j]) {
        revisit = j;
        break;
      }
    if (revisit < 0) return res;
    if (++res.swaps > opts.backtrack_cap) {
      res.budget_exhausted = true;
      return res;
    }
    std::tie(st.x[revisit], st.y[revisit]) = st.alt[revisit];
    st.flag[revisit] = false;
    i = revisit;
    st.l_x = st.l_y = h;
    for (int j = h; j >= i; --j) {
      if (st.x[j]) st.l_x = j;
      if (st.y[j]) st.l_y = j;
    }
  }
}

}  // namespace mulmatch
