#include "mulmatch/eval.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

#include "mulmatch/errors.hpp"

namespace mulmatch {

std::vector<TermId> free_vars(const TermStore& s, TermId root) {
  std::vector<TermId> vars;
  for (TermId t : subterms(s, root))
    if (s.kind(t) == Kind::Var) vars.push_back(t);
  std::sort(vars.begin(), vars.end(), [&](TermId a, TermId b) {
    return s.var_name(a) < s.var_name(b);
  });
  return vars;
}

static BitVec eval_node(const TermStore& s, const Node& n,
                        const BitVec& a, const BitVec& b) {
  switch (n.kind) {
    case Kind::Concat: return bv_concat(a, b);
    case Kind::BvAdd: return bv_add(a, b);
    case Kind::BvMul: return bv_mul(a, b);
    case Kind::BvAnd:
    case Kind::BoolAnd: return bv_and(a, b);
    case Kind::BvOr:
    case Kind::BoolOr: return bv_or(a, b);
    case Kind::BvXor:
    case Kind::BoolXor: return bv_xor(a, b);
    case Kind::BvNot:
    case Kind::BoolNot: return bv_not(a);
    case Kind::Extract: return bv_extract(n.aux0, n.aux1, a);
    case Kind::Eq: return BitVec::from_u64(1, a == b ? 1 : 0);
    default: assert(false && "leaf kinds handled by callers"); return {};
  }
}

BitVec eval(const TermStore& s, TermId t, const Assignment& a) {
  Evaluator ev(s, {t});
  std::vector<BitVec> values;
  values.reserve(ev.vars().size());
  for (TermId v : ev.vars()) {
    auto it = a.find(s.var_name(v));
    if (it == a.end()) throw UnboundVariable(s.var_name(v));
    assert(it->second.width() == s.width(v));
    values.push_back(it->second);
  }
  ev.run(values);
  return ev.value(t);
}

Evaluator::Evaluator(const TermStore& s, std::vector<TermId> roots)
    : store_(s) {
  std::vector<bool> seen(s.size(), false);
  std::function<void(TermId)> visit = [&](TermId t) {
    if (seen[t.value]) return;
    seen[t.value] = true;
    const Node& n = s.node(t);
    if (n.a.valid()) visit(n.a);
    if (n.b.valid()) visit(n.b);
    order_.push_back(t);  // post-order: children precede parents
    if (n.kind == Kind::Var) vars_.push_back(t);
  };
  for (TermId r : roots) visit(r);
  std::sort(vars_.begin(), vars_.end(), [&](TermId a, TermId b) {
    return s.var_name(a) < s.var_name(b);
  });
  memo_.resize(s.size());
}

void Evaluator::run(const std::vector<BitVec>& values) {
  assert(values.size() == vars_.size());
  for (size_t i = 0; i < vars_.size(); ++i) {
    assert(values[i].width() == store_.width(vars_[i]));
    memo_[vars_[i].value] = values[i];
  }
  for (TermId t : order_) {
    const Node& n = store_.node(t);
    if (n.kind == Kind::Var) continue;
    if (n.kind == Kind::Const) {
      memo_[t.value] = store_.const_value(t);
      continue;
    }
    memo_[t.value] = eval_node(store_, n, memo_[n.a.value],
                               n.b.valid() ? memo_[n.b.value] : BitVec());
  }
}

// splits the bits of `counter` into per-variable values, first var lowest
static std::vector<BitVec> slice_counter(const TermStore& s,
                                         const std::vector<TermId>& vars,
                                         uint64_t counter) {
  std::vector<BitVec> values;
  values.reserve(vars.size());
  for (TermId v : vars) {
    uint32_t w = s.width(v);
    values.push_back(BitVec::from_u64(w, counter & ((w >= 64) ? ~0ULL : ((1ULL << w) - 1))));
    counter >>= w;
  }
  return values;
}

static Assignment to_assignment(const TermStore& s,
                                const std::vector<TermId>& vars,
                                const std::vector<BitVec>& values) {
  Assignment a;
  for (size_t i = 0; i < vars.size(); ++i)
    a.emplace(s.var_name(vars[i]), values[i]);
  return a;
}

TautologyResult check_tautology(const TermStore& s, TermId eq,
                                const TautologyOptions& opts) {
  assert(s.kind(eq) == Kind::Eq);
  Evaluator ev(s, {eq});
  const std::vector<TermId>& vars = ev.vars();
  uint64_t total_bits = 0;
  for (TermId v : vars) total_bits += s.width(v);

  TautologyResult res;
  if (total_bits <= opts.exhaustive_limit_bits && total_bits <= 63) {
    uint64_t count = 1ULL << total_bits;
    for (uint64_t c = 0; c < count; ++c) {
      std::vector<BitVec> values = slice_counter(s, vars, c);
      ev.run(values);
      if (ev.value(eq).is_zero()) {
        res.status = TautologyStatus::Falsified;
        res.counterexample = to_assignment(s, vars, values);
        res.assignments_checked = c + 1;
        return res;
      }
    }
    res.status = TautologyStatus::Proved;
    res.assignments_checked = count;
    return res;
  }

  SplitMix64 rng(opts.seed);
  for (uint64_t trial = 0; trial < opts.random_trials; ++trial) {
    std::vector<BitVec> values;
    values.reserve(vars.size());
    for (TermId v : vars) values.push_back(rng.next_bits(s.width(v)));
    ev.run(values);
    if (ev.value(eq).is_zero()) {
      res.status = TautologyStatus::Falsified;
      res.counterexample = to_assignment(s, vars, values);
      res.assignments_checked = trial + 1;
      return res;
    }
  }
  res.status = TautologyStatus::Skipped;
  res.assignments_checked = opts.random_trials;
  res.note = "randomly vetted only";
  return res;
}

bool check_pp_array(const TermStore& s, const Match& m, const PPArray& lambda) {
  assert(m.x_blocks.size() == m.y_blocks.size());
  std::map<int, PPMultiset> recomputed;
  int top_nonzero = 0;
  for (size_t j = 0; j < m.x_blocks.size(); ++j) {
    if (is_zero_const(s, m.x_blocks[j])) continue;
    for (size_t k = 0; k < m.y_blocks.size(); ++k) {
      if (is_zero_const(s, m.y_blocks[k])) continue;
      int idx = static_cast<int>(j + k) + 1;  // blocks are 0-based here
      multiset_add(recomputed[idx],
                   PartialProduct(m.x_blocks[j], m.y_blocks[k], m.block_width));
      top_nonzero = std::max(top_nonzero, idx);
    }
  }
  if (lambda.empty()) return recomputed.empty();
  if (top_nonzero > lambda.highest()) return false;
  return recomputed == lambda.slots;
}

}  // namespace mulmatch
