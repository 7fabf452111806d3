#pragma once

#include <cstdint>
#include <optional>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mulmatch/bitvec.hpp"

namespace mulmatch {

enum class Kind : uint8_t {
  Var,
  Const,
  Concat,
  BvAdd,
  BvMul,
  BvAnd,
  BvOr,
  BvXor,
  BvNot,
  Extract,
  Eq,
  BoolNot,
  BoolAnd,
  BoolOr,
  BoolXor,
};

bool is_commutative(Kind k);
const char* kind_name(Kind k);

// Index into the owning TermStore. Equal ids mean syntactically identical
// terms; commuted operands of commutative kinds intern to the same id.
struct TermId {
  uint32_t value = UINT32_MAX;
  bool valid() const { return value != UINT32_MAX; }
  friend auto operator<=>(const TermId&, const TermId&) = default;
};

struct Sort {
  uint32_t width = 0;   // bits; 1 for Boolean terms
  bool boolean = false;
  friend bool operator==(const Sort&, const Sort&) = default;
};

struct Node {
  Kind kind;
  Sort sort;
  TermId a, b;        // children; b invalid for unary kinds, both for leaves
  uint32_t aux0 = 0;  // Var: name index / Const: pool index / Extract: hi
  uint32_t aux1 = 0;  // Extract: lo
};

// Hash-consed term DAG. All construction goes through mk_* functions, which
// enforce the width rules and throw WidthMismatch on violation. Children of
// commutative kinds are stored sorted by id, so a op b == b op a structurally.
class TermStore {
 public:
  TermId var(const std::string& name, uint32_t width, bool boolean = false);
  TermId constant(const BitVec& bits);
  TermId zero(uint32_t width) { return constant(BitVec::zeros(width)); }

  TermId concat(TermId hi, TermId lo);
  TermId bv_add(TermId a, TermId b) { return binop(Kind::BvAdd, a, b); }
  TermId bv_mul(TermId a, TermId b) { return binop(Kind::BvMul, a, b); }
  TermId bv_and(TermId a, TermId b) { return binop(Kind::BvAnd, a, b); }
  TermId bv_or(TermId a, TermId b) { return binop(Kind::BvOr, a, b); }
  TermId bv_xor(TermId a, TermId b) { return binop(Kind::BvXor, a, b); }
  TermId bv_not(TermId a);
  TermId extract(uint32_t hi, uint32_t lo, TermId a);
  TermId eq(TermId a, TermId b);
  TermId bool_not(TermId a);
  TermId bool_and(TermId a, TermId b) { return boolop(Kind::BoolAnd, a, b); }
  TermId bool_or(TermId a, TermId b) { return boolop(Kind::BoolOr, a, b); }
  TermId bool_xor(TermId a, TermId b) { return boolop(Kind::BoolXor, a, b); }

  // generic constructor for the fixed-arity operator kinds
  TermId mk_term(Kind k, std::span<const TermId> children);

  // lookup without interning; used by matchers probing for existing nodes
  std::optional<TermId> find_binary(Kind k, TermId a, TermId b) const;

  const Node& node(TermId t) const { return nodes_[t.value]; }
  Kind kind(TermId t) const { return node(t).kind; }
  Sort sort(TermId t) const { return node(t).sort; }
  uint32_t width(TermId t) const { return node(t).sort.width; }
  bool is_bool(TermId t) const { return node(t).sort.boolean; }
  const std::string& var_name(TermId t) const;
  const BitVec& const_value(TermId t) const;
  size_t size() const { return nodes_.size(); }

 private:
  TermId binop(Kind k, TermId a, TermId b);
  TermId boolop(Kind k, TermId a, TermId b);
  TermId intern(Node n);

  struct Key {
    uint8_t kind;
    uint32_t a, b, aux0, aux1;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const;
  };

  std::vector<Node> nodes_;
  std::unordered_map<Key, uint32_t, KeyHash> interned_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, uint32_t> name_index_;
  std::vector<BitVec> consts_;
  std::map<BitVec, uint32_t> const_index_;
};

// Concat segments, most-significant first. Non-concat terms flatten to a
// single segment.
struct ConcatChain {
  std::vector<TermId> segments;
};
ConcatChain flatten_concat(const TermStore& s, TermId t);

// Summands of a (possibly nested) bvadd, sorted by id: order of association
// carries no meaning, so the chain is a canonical multiset.
struct SumChain {
  std::vector<TermId> summands;
};
SumChain flatten_add(const TermStore& s, TermId t);

// t zero-extended to `width` bits; returns t itself when width == width(t)
TermId zero_ext(TermStore& s, TermId t, uint32_t width);

bool is_zero_const(const TermStore& s, TermId t);

// Recognizes (0^w • a) * (0^w • b) with width(a) == width(b) == w.
// The (a, b) pair is unordered; callers must not rely on its order.
struct PartialProductParts {
  TermId a, b;
  uint32_t operand_width;
};
std::optional<PartialProductParts> match_partial_product(const TermStore& s,
                                                         TermId t);

// every distinct DAG node reachable from root, exactly once, preorder
std::vector<TermId> subterms(const TermStore& s, TermId root);

std::string to_string(const TermStore& s, TermId t);

}  // namespace mulmatch
