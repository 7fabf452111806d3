#include "mulmatch/match_wallace.hpp"

#include <map>
#include <set>

namespace mulmatch {

std::optional<CarryFullParts> match_carry_full(const TermStore& s, TermId u) {
  if (s.kind(u) != Kind::BvOr || s.width(u) != 1) return std::nullopt;
  std::vector<TermId> leaves;
  std::vector<TermId> stack{u};
  while (!stack.empty()) {
    TermId v = stack.back();
    stack.pop_back();
    if (s.kind(v) == Kind::BvOr) {
      stack.push_back(s.node(v).a);
      stack.push_back(s.node(v).b);
    } else {
      leaves.push_back(v);
    }
  }
  if (leaves.size() != 3) return std::nullopt;
  // the three conjunct pairs must form a triangle over distinct {a, b, c}
  std::map<TermId, int> occurrences;
  std::set<std::pair<TermId, TermId>> pairs;
  for (TermId leaf : leaves) {
    if (s.kind(leaf) != Kind::BvAnd) return std::nullopt;
    const Node& n = s.node(leaf);
    ++occurrences[n.a];
    ++occurrences[n.b];
    pairs.insert({n.a, n.b});
  }
  if (occurrences.size() != 3 || pairs.size() != 3) return std::nullopt;
  for (const auto& [term, count] : occurrences)
    if (count != 2) return std::nullopt;
  auto it = occurrences.begin();
  CarryFullParts parts;
  parts.a = (it++)->first;
  parts.b = (it++)->first;
  parts.c = it->first;
  return parts;
}

std::optional<CarryHalfParts> match_carry_half(const TermStore& s, TermId u) {
  if (s.kind(u) != Kind::BvAnd || s.width(u) != 1) return std::nullopt;
  return CarryHalfParts{s.node(u).a, s.node(u).b};
}

namespace {

using TermMultiset = std::map<TermId, int>;

bool ms_contains(const TermMultiset& m, TermId t) {
  return m.find(t) != m.end();
}

void ms_remove_one(TermMultiset& m, TermId t) {
  auto it = m.find(t);
  if (--it->second == 0) m.erase(it);
}

// Δ_{i-1} must hold the adder inputs and the intermediate sum of one input
// pair; both are consumed. The full sum must exist as a term but its
// frontier membership is not checked here: a later adder of the same column
// may consume it first, and consumption order across a column's adders is
// arbitrary (their removals are disjoint). The end-of-bit frontier check
// still catches a sum that never belonged to Δ_{i-1}. Which pair formed the
// intermediate sum is not recorded in the triple, so all three are tried.
bool consume_carry_full(const TermStore& s, TermMultiset& prev,
                        const CarryFullParts& t3) {
  const TermId in[3] = {t3.a, t3.b, t3.c};
  constexpr int kPairings[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
  for (const auto& pairing : kPairings) {
    TermId p = in[pairing[0]], q = in[pairing[1]], r = in[pairing[2]];
    auto pair_sum = s.find_binary(Kind::BvXor, p, q);
    if (!pair_sum) continue;
    if (!s.find_binary(Kind::BvXor, *pair_sum, r)) continue;
    TermMultiset reduced = prev;
    bool ok = true;
    for (TermId needed : {p, q, r, *pair_sum}) {
      if (!ms_contains(reduced, needed)) {
        ok = false;
        break;
      }
      ms_remove_one(reduced, needed);
    }
    if (!ok) continue;
    prev = std::move(reduced);
    return true;
  }
  return false;
}

// as above with no intermediate sum: consume a and b
bool consume_carry_half(const TermStore& s, TermMultiset& prev,
                        const CarryHalfParts& t2) {
  if (!s.find_binary(Kind::BvXor, t2.a, t2.b)) return false;
  TermMultiset reduced = prev;
  for (TermId needed : {t2.a, t2.b}) {
    if (!ms_contains(reduced, needed)) return false;
    ms_remove_one(reduced, needed);
  }
  prev = std::move(reduced);
  return true;
}

bool is_exactly(const TermMultiset& m, TermId t) {
  return m.size() == 1 && m.begin()->first == t && m.begin()->second == 1;
}

}  // namespace

WallaceMatchResult match_wallace(TermStore& s, TermId t,
                                 const RecoveryOptions& opts) {
  WallaceMatchResult res;
  res.lambda.block_width = 1;
  if (s.is_bool(t) || s.kind(t) != Kind::Concat) return res;
  ConcatChain chain = flatten_concat(s, t);
  const int k = static_cast<int>(chain.segments.size());
  std::vector<TermId> bits(k + 1);  // 1-indexed, least significant first
  for (int i = 1; i <= k; ++i) {
    TermId seg = chain.segments[k - i];
    if (s.width(seg) != 1) return res;
    bits[i] = seg;
  }

  std::vector<TermMultiset> delta(k + 1);
  for (int i = 1; i <= k; ++i) {
    delta[i][bits[i]] = 1;
    std::multiset<TermId> work{bits[i]};
    while (!work.empty()) {
      TermId u = *work.begin();
      work.erase(work.begin());
      if (is_zero_const(s, u)) continue;
      switch (s.kind(u)) {
        case Kind::BvXor: {
          // one nesting level at a time: intermediate sums must stay
          // visible to the carry checks of the next bit
          const Node& n = s.node(u);
          work.insert(n.a);
          work.insert(n.b);
          ++delta[i][n.a];
          ++delta[i][n.b];
          break;
        }
        case Kind::BvOr: {
          auto triple = match_carry_full(s, u);
          if (!triple || !consume_carry_full(s, delta[i - 1], *triple))
            return res;
          break;
        }
        case Kind::BvAnd: {
          auto pair = match_carry_half(s, u);
          if (i >= 2 && consume_carry_half(s, delta[i - 1], *pair)) break;
          res.lambda.insert(i, PartialProduct(pair->a, pair->b, 1));
          break;
        }
        default:
          return res;
      }
    }
    // every carry produced for bit i-1 must have been claimed exactly once
    if (i >= 2 && !is_exactly(delta[i - 1], bits[i - 1])) return res;
  }
  // the top bit gets the same treatment: leftover entries would mean unused
  // carries, i.e. a truncated tree whose product disagrees with the output
  if (!is_exactly(delta[k], bits[k])) return res;

  res.structure_ok = true;
  if (res.lambda.empty()) return res;
  res.recovery =
      get_mult_operands(s, res.lambda, MatchSource::Wallace, t, opts);
  res.matches = res.recovery.matches;
  return res;
}

}  // namespace mulmatch
