#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "mulmatch/errors.hpp"
#include "mulmatch/term.hpp"

using namespace mulmatch;

TEST_CASE("structural identity and commutative normalization") {
  TermStore s;
  TermId x = s.var("x", 8), y = s.var("y", 8);
  CHECK(s.var("x", 8) == x);
  CHECK(s.bv_add(x, y) == s.bv_add(y, x));
  CHECK(s.bv_mul(x, y) == s.bv_mul(y, x));
  CHECK(s.bv_and(x, y) == s.bv_and(y, x));
  CHECK(s.eq(x, y) == s.eq(y, x));
  CHECK(s.concat(x, y) != s.concat(y, x));
  CHECK(s.constant(BitVec::from_u64(4, 5)) ==
        s.constant(BitVec::from_u64(4, 5)));
  CHECK(s.constant(BitVec::from_u64(4, 5)) !=
        s.constant(BitVec::from_u64(5, 5)));
  // same structure interns to the same node, so == is identity
  TermId t1 = s.bv_add(s.bv_mul(x, y), x);
  TermId t2 = s.bv_add(x, s.bv_mul(y, x));
  CHECK(t1 == t2);
}

TEST_CASE("width and sort rules") {
  TermStore s;
  TermId x = s.var("x", 8), y = s.var("y", 4);
  CHECK_THROWS_AS(s.bv_add(x, y), WidthMismatch);
  CHECK_THROWS_AS(s.eq(x, y), WidthMismatch);
  CHECK(s.width(s.concat(x, y)) == 12);
  CHECK(s.width(s.extract(5, 2, x)) == 4);
  CHECK_THROWS_AS(s.extract(8, 0, x), WidthMismatch);
  CHECK_THROWS_AS(s.extract(2, 5, x), WidthMismatch);

  TermId e = s.eq(x, x);
  CHECK(s.is_bool(e));
  CHECK(s.width(e) == 1);
  CHECK_THROWS_AS(s.bv_not(e), WidthMismatch);
  CHECK_THROWS_AS(s.bool_and(x, x), WidthMismatch);
  CHECK_THROWS_AS(s.concat(e, x), WidthMismatch);
  CHECK(s.bool_and(e, s.bool_not(e)) == s.bool_and(s.bool_not(e), e));

  // a Boolean and a width-1 bit-vector are different sorts
  TermId b = s.var("b", 1);
  CHECK_THROWS_AS(s.eq(e, b), WidthMismatch);
}

TEST_CASE("variable redeclaration with another sort is rejected") {
  TermStore s;
  TermId x = s.var("x", 8);
  CHECK_THROWS_AS(s.var("x", 4), WidthMismatch);
  CHECK_THROWS_AS(s.var("x", 8, true), WidthMismatch);
  CHECK(s.var("x", 8) == x);
  CHECK(s.var_name(x) == "x");
}

TEST_CASE("find_binary probes without interning") {
  TermStore s;
  TermId x = s.var("x", 4), y = s.var("y", 4);
  size_t before = s.size();
  CHECK(!s.find_binary(Kind::BvAdd, x, y));
  CHECK(s.size() == before);
  TermId sum = s.bv_add(x, y);
  CHECK(s.find_binary(Kind::BvAdd, x, y) == sum);
  CHECK(s.find_binary(Kind::BvAdd, y, x) == sum);
  CHECK(!s.find_binary(Kind::BvMul, x, y));
}

TEST_CASE("flatten_concat yields segments most-significant first") {
  TermStore s;
  TermId a = s.var("a", 2), b = s.var("b", 3), c = s.var("c", 4);
  std::vector<TermId> expect{a, b, c};
  CHECK(flatten_concat(s, s.concat(s.concat(a, b), c)).segments == expect);
  CHECK(flatten_concat(s, s.concat(a, s.concat(b, c))).segments == expect);
  CHECK(flatten_concat(s, a).segments == std::vector<TermId>{a});
}

TEST_CASE("flatten_add yields a sorted canonical multiset") {
  TermStore s;
  TermId a = s.var("a", 4), b = s.var("b", 4), c = s.var("c", 4);
  TermId t1 = s.bv_add(s.bv_add(a, b), c);
  TermId t2 = s.bv_add(a, s.bv_add(c, b));
  CHECK(flatten_add(s, t1).summands == flatten_add(s, t2).summands);
  auto sum = flatten_add(s, t1).summands;
  CHECK(sum.size() == 3);
  CHECK(std::is_sorted(sum.begin(), sum.end()));
  CHECK(flatten_add(s, s.bv_add(a, a)).summands ==
        std::vector<TermId>{a, a});
}

TEST_CASE("zero_ext builds the padding concat") {
  TermStore s;
  TermId x = s.var("x", 4);
  CHECK(zero_ext(s, x, 4) == x);
  TermId e = zero_ext(s, x, 7);
  CHECK(s.width(e) == 7);
  CHECK(s.kind(e) == Kind::Concat);
  CHECK(is_zero_const(s, s.node(e).a));
  CHECK(s.node(e).b == x);
  CHECK_THROWS_AS(zero_ext(s, x, 3), WidthMismatch);
}

TEST_CASE("partial product recognition") {
  TermStore s;
  TermId a = s.var("a", 3), b = s.var("b", 3);
  TermId pp = s.bv_mul(zero_ext(s, a, 6), zero_ext(s, b, 6));
  auto parts = match_partial_product(s, pp);
  REQUIRE(parts);
  CHECK(parts->operand_width == 3);
  bool same = (parts->a == a && parts->b == b) ||
              (parts->a == b && parts->b == a);
  CHECK(same);

  TermId sq = s.bv_mul(zero_ext(s, a, 6), zero_ext(s, a, 6));
  auto sq_parts = match_partial_product(s, sq);
  REQUIRE(sq_parts);
  CHECK(sq_parts->a == a);
  CHECK(sq_parts->b == a);

  // the zero pad must be exactly as wide as the operand
  TermId uneven = s.bv_mul(s.concat(s.zero(2), s.var("c", 4)),
                           s.concat(s.zero(4), s.var("d", 2)));
  CHECK(!match_partial_product(s, uneven));
  CHECK(!match_partial_product(s, s.bv_mul(a, b)));
  TermId mixed = s.bv_mul(zero_ext(s, a, 6),
                          s.concat(s.zero(1), s.var("e", 5)));
  CHECK(!match_partial_product(s, mixed));
  // non-mul nodes never match
  CHECK(!match_partial_product(s, zero_ext(s, a, 6)));
}

TEST_CASE("subterms walks each distinct node once, preorder") {
  TermStore s;
  TermId x = s.var("x", 4), y = s.var("y", 4);
  TermId prod = s.bv_mul(x, y);
  TermId root = s.bv_add(prod, prod);  // shared child
  auto nodes = subterms(s, root);
  CHECK(nodes.front() == root);
  CHECK(std::count(nodes.begin(), nodes.end(), prod) == 1);
  CHECK(nodes.size() == 4);  // root, prod, x, y
}

TEST_CASE("to_string renders the smt operator names") {
  TermStore s;
  TermId x = s.var("x", 2);
  TermId t = s.bv_add(x, s.constant(BitVec::from_u64(2, 1)));
  CHECK(to_string(s, t) == "(bvadd x #b01)");
  CHECK(to_string(s, s.extract(1, 0, x)) == "((_ extract 1 0) x)");
}
