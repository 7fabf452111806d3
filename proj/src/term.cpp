#include "mulmatch/term.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

#include "mulmatch/errors.hpp"

namespace mulmatch {

bool is_commutative(Kind k) {
  switch (k) {
    case Kind::BvAdd:
    case Kind::BvMul:
    case Kind::BvAnd:
    case Kind::BvOr:
    case Kind::BvXor:
    case Kind::Eq:
    case Kind::BoolAnd:
    case Kind::BoolOr:
    case Kind::BoolXor:
      return true;
    default:
      return false;
  }
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Var: return "var";
    case Kind::Const: return "const";
    case Kind::Concat: return "concat";
    case Kind::BvAdd: return "bvadd";
    case Kind::BvMul: return "bvmul";
    case Kind::BvAnd: return "bvand";
    case Kind::BvOr: return "bvor";
    case Kind::BvXor: return "bvxor";
    case Kind::BvNot: return "bvnot";
    case Kind::Extract: return "extract";
    case Kind::Eq: return "=";
    case Kind::BoolNot: return "not";
    case Kind::BoolAnd: return "and";
    case Kind::BoolOr: return "or";
    case Kind::BoolXor: return "xor";
  }
  return "?";
}

size_t TermStore::KeyHash::operator()(const Key& k) const {
  uint64_t h = k.kind;
  for (uint64_t v : {uint64_t(k.a), uint64_t(k.b), uint64_t(k.aux0),
                     uint64_t(k.aux1)}) {
    h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<size_t>(h);
}

TermId TermStore::intern(Node n) {
  Key key{static_cast<uint8_t>(n.kind), n.a.value, n.b.value, n.aux0, n.aux1};
  auto it = interned_.find(key);
  if (it != interned_.end()) return TermId{it->second};
  uint32_t id = static_cast<uint32_t>(nodes_.size());
  nodes_.push_back(n);
  interned_.emplace(key, id);
  return TermId{id};
}

TermId TermStore::var(const std::string& name, uint32_t width, bool boolean) {
  if (width == 0) throw WidthMismatch("variable " + name + " has width 0");
  uint32_t ni;
  auto it = name_index_.find(name);
  if (it != name_index_.end()) {
    ni = it->second;
  } else {
    ni = static_cast<uint32_t>(names_.size());
    names_.push_back(name);
    name_index_.emplace(name, ni);
  }
  Node n{Kind::Var, Sort{width, boolean}, TermId{}, TermId{}, ni, 0};
  Key key{static_cast<uint8_t>(Kind::Var), UINT32_MAX, UINT32_MAX, ni, 0};
  auto hit = interned_.find(key);
  if (hit != interned_.end()) {
    const Node& existing = nodes_[hit->second];
    if (!(existing.sort == n.sort))
      throw WidthMismatch("variable " + name + " redeclared with another sort");
    return TermId{hit->second};
  }
  return intern(n);
}

TermId TermStore::constant(const BitVec& bits) {
  if (bits.width() == 0) throw WidthMismatch("constant has width 0");
  uint32_t ci;
  auto it = const_index_.find(bits);
  if (it != const_index_.end()) {
    ci = it->second;
  } else {
    ci = static_cast<uint32_t>(consts_.size());
    consts_.push_back(bits);
    const_index_.emplace(bits, ci);
  }
  return intern(Node{Kind::Const, Sort{bits.width(), false}, TermId{}, TermId{},
                     ci, 0});
}

TermId TermStore::concat(TermId hi, TermId lo) {
  const Node& h = node(hi);
  const Node& l = node(lo);
  if (h.sort.boolean || l.sort.boolean)
    throw WidthMismatch("concat over Boolean operand");
  return intern(Node{Kind::Concat, Sort{h.sort.width + l.sort.width, false},
                     hi, lo, 0, 0});
}

TermId TermStore::binop(Kind k, TermId a, TermId b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  if (na.sort.boolean || nb.sort.boolean)
    throw WidthMismatch(std::string(kind_name(k)) + " over Boolean operand");
  if (na.sort.width != nb.sort.width)
    throw WidthMismatch(std::string(kind_name(k)) + " width mismatch: " +
                        std::to_string(na.sort.width) + " vs " +
                        std::to_string(nb.sort.width));
  if (b < a) std::swap(a, b);
  return intern(Node{k, Sort{na.sort.width, false}, a, b, 0, 0});
}

TermId TermStore::bv_not(TermId a) {
  const Node& na = node(a);
  if (na.sort.boolean) throw WidthMismatch("bvnot over Boolean operand");
  return intern(Node{Kind::BvNot, na.sort, a, TermId{}, 0, 0});
}

TermId TermStore::extract(uint32_t hi, uint32_t lo, TermId a) {
  const Node& na = node(a);
  if (na.sort.boolean) throw WidthMismatch("extract over Boolean operand");
  if (lo > hi || hi >= na.sort.width)
    throw WidthMismatch("extract [" + std::to_string(hi) + ":" +
                        std::to_string(lo) + "] out of range for width " +
                        std::to_string(na.sort.width));
  return intern(
      Node{Kind::Extract, Sort{hi - lo + 1, false}, a, TermId{}, hi, lo});
}

TermId TermStore::eq(TermId a, TermId b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  if (!(na.sort == nb.sort))
    throw WidthMismatch("= over mismatched sorts");
  if (b < a) std::swap(a, b);
  return intern(Node{Kind::Eq, Sort{1, true}, a, b, 0, 0});
}

TermId TermStore::bool_not(TermId a) {
  if (!node(a).sort.boolean) throw WidthMismatch("not over non-Boolean");
  return intern(Node{Kind::BoolNot, Sort{1, true}, a, TermId{}, 0, 0});
}

TermId TermStore::boolop(Kind k, TermId a, TermId b) {
  if (!node(a).sort.boolean || !node(b).sort.boolean)
    throw WidthMismatch(std::string(kind_name(k)) + " over non-Boolean");
  if (b < a) std::swap(a, b);
  return intern(Node{k, Sort{1, true}, a, b, 0, 0});
}

TermId TermStore::mk_term(Kind k, std::span<const TermId> children) {
  auto want = [&](size_t n) {
    if (children.size() != n)
      throw WidthMismatch(std::string(kind_name(k)) + " expects " +
                          std::to_string(n) + " children, got " +
                          std::to_string(children.size()));
  };
  switch (k) {
    case Kind::Concat:
      want(2);
      return concat(children[0], children[1]);
    case Kind::BvAdd:
    case Kind::BvMul:
    case Kind::BvAnd:
    case Kind::BvOr:
    case Kind::BvXor:
      want(2);
      return binop(k, children[0], children[1]);
    case Kind::BvNot:
      want(1);
      return bv_not(children[0]);
    case Kind::Eq:
      want(2);
      return eq(children[0], children[1]);
    case Kind::BoolNot:
      want(1);
      return bool_not(children[0]);
    case Kind::BoolAnd:
    case Kind::BoolOr:
    case Kind::BoolXor:
      want(2);
      return boolop(k, children[0], children[1]);
    default:
      throw WidthMismatch(std::string(kind_name(k)) +
                          " is not constructible from children alone");
  }
}

std::optional<TermId> TermStore::find_binary(Kind k, TermId a, TermId b) const {
  if (is_commutative(k) && b < a) std::swap(a, b);
  Key key{static_cast<uint8_t>(k), a.value, b.value, 0, 0};
  auto it = interned_.find(key);
  if (it == interned_.end()) return std::nullopt;
  return TermId{it->second};
}

const std::string& TermStore::var_name(TermId t) const {
  assert(kind(t) == Kind::Var);
  return names_[node(t).aux0];
}

const BitVec& TermStore::const_value(TermId t) const {
  assert(kind(t) == Kind::Const);
  return consts_[node(t).aux0];
}

ConcatChain flatten_concat(const TermStore& s, TermId t) {
  ConcatChain chain;
  std::function<void(TermId)> walk = [&](TermId u) {
    const Node& n = s.node(u);
    if (n.kind == Kind::Concat) {
      walk(n.a);
      walk(n.b);
    } else {
      chain.segments.push_back(u);
    }
  };
  walk(t);
  return chain;
}

SumChain flatten_add(const TermStore& s, TermId t) {
  SumChain chain;
  std::function<void(TermId)> walk = [&](TermId u) {
    const Node& n = s.node(u);
    if (n.kind == Kind::BvAdd) {
      walk(n.a);
      walk(n.b);
    } else {
      chain.summands.push_back(u);
    }
  };
  walk(t);
  std::sort(chain.summands.begin(), chain.summands.end());
  return chain;
}

TermId zero_ext(TermStore& s, TermId t, uint32_t width) {
  uint32_t w = s.width(t);
  if (width < w)
    throw WidthMismatch("zero_ext to " + std::to_string(width) +
                        " below term width " + std::to_string(w));
  if (width == w) return t;
  return s.concat(s.zero(width - w), t);
}

bool is_zero_const(const TermStore& s, TermId t) {
  return s.kind(t) == Kind::Const && s.const_value(t).is_zero();
}

std::optional<PartialProductParts> match_partial_product(const TermStore& s,
                                                         TermId t) {
  const Node& n = s.node(t);
  if (n.kind != Kind::BvMul) return std::nullopt;
  auto split = [&](TermId c) -> std::optional<std::pair<TermId, uint32_t>> {
    const Node& cn = s.node(c);
    if (cn.kind != Kind::Concat) return std::nullopt;
    if (!is_zero_const(s, cn.a)) return std::nullopt;
    if (s.width(cn.a) != s.width(cn.b)) return std::nullopt;
    return std::make_pair(cn.b, s.width(cn.b));
  };
  auto lhs = split(n.a);
  auto rhs = split(n.b);
  if (!lhs || !rhs || lhs->second != rhs->second) return std::nullopt;
  return PartialProductParts{lhs->first, rhs->first, lhs->second};
}

std::vector<TermId> subterms(const TermStore& s, TermId root) {
  std::vector<TermId> out;
  std::vector<bool> seen(s.size(), false);
  std::function<void(TermId)> walk = [&](TermId u) {
    if (seen[u.value]) return;
    seen[u.value] = true;
    out.push_back(u);
    const Node& n = s.node(u);
    if (n.a.valid()) walk(n.a);
    if (n.b.valid()) walk(n.b);
  };
  walk(root);
  return out;
}

std::string to_string(const TermStore& s, TermId t) {
  const Node& n = s.node(t);
  switch (n.kind) {
    case Kind::Var:
      return s.var_name(t);
    case Kind::Const:
      return "#b" + s.const_value(t).to_binary();
    case Kind::Extract:
      return "((_ extract " + std::to_string(n.aux0) + " " +
             std::to_string(n.aux1) + ") " + to_string(s, n.a) + ")";
    case Kind::BvNot:
    case Kind::BoolNot:
      return std::string("(") + kind_name(n.kind) + " " + to_string(s, n.a) +
             ")";
    default:
      return std::string("(") + kind_name(n.kind) + " " + to_string(s, n.a) +
             " " + to_string(s, n.b) + ")";
  }
}

}  // namespace mulmatch
