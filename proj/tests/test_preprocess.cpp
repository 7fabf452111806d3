#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "mulmatch/benchgen.hpp"
#include "mulmatch/eval.hpp"
#include "mulmatch/preprocess.hpp"

using namespace mulmatch;

TEST_CASE("tautology width covers both the product and the target") {
  TermStore s;

  SUBCASE("product wider than target") {
    Match m;
    m.block_width = 5;
    m.x_blocks = {s.var("a", 5), s.var("b", 5)};
    m.y_blocks = {s.var("c", 5), s.var("d", 5)};
    m.target = s.var("t", 12);
    TermId taut = build_tautology(s, m);
    REQUIRE(s.kind(taut) == Kind::Eq);
    CHECK(s.width(s.node(taut).a) == 20);
    CHECK(s.width(s.node(taut).b) == 20);
  }

  SUBCASE("target wider than product") {
    Match m;
    m.block_width = 2;
    m.x_blocks = {s.var("a", 2)};
    m.y_blocks = {s.var("b", 2)};
    m.target = s.var("t", 9);
    TermId taut = build_tautology(s, m);
    CHECK(s.width(s.node(taut).a) == 9);
  }

  SUBCASE("single bits") {
    Match m;
    m.block_width = 1;
    m.x_blocks = {s.var("a", 1)};
    m.y_blocks = {s.var("b", 1)};
    m.target = s.var("t", 2);
    TermId taut = build_tautology(s, m);
    CHECK(s.width(s.node(taut).a) == 2);
  }
}

TEST_CASE("a planted sum gains exactly its learned equality") {
  TermStore s;
  LongSpec spec;
  spec.blocks = 3;
  spec.block_width = 2;
  spec.seed = 11;
  Script script = gen_long(s, spec);

  auto [out, report] = preprocess(s, script);
  REQUIRE(report.entries.size() == 1);
  const MatchEntry& e = report.entries[0];
  CHECK(e.source == MatchSource::Long);
  CHECK(e.block_width == 2);
  CHECK(e.x_width == 10);  // five blocks of two bits
  CHECK(e.y_width == 10);
  REQUIRE(e.candidates.size() == 1);

  CHECK(report.matches_found == 1);
  CHECK(report.assertions_emitted == 1);
  CHECK(report.duplicates_suppressed == 0);
  CHECK(report.subterms_scanned > 0);
  REQUIRE(out.learned.size() == 1);
  REQUIRE(out.learned_meta.size() == 1);
  CHECK(out.learned_meta[0].source == MatchSource::Long);
  CHECK(out.learned_meta[0].x_width == 10);
  CHECK(out.assertions == script.assertions);

  auto taut = check_tautology(s, out.learned[0]);
  CHECK(taut.status == TautologyStatus::Proved);

  // a second pass over the augmented script adds nothing
  auto [again, report2] = preprocess(s, out);
  CHECK(report2.assertions_emitted == 0);
  CHECK(report2.duplicates_suppressed == report2.matches_found);
  CHECK(again.learned.size() == out.learned.size());

  // even when learned assertions are themselves scanned
  PreprocessOptions scan_learned;
  scan_learned.match_learned = true;
  auto [again2, report3] = preprocess(s, out, scan_learned);
  CHECK(report3.assertions_emitted == 0);
  CHECK(report3.subterms_scanned > report2.subterms_scanned);
}

TEST_CASE("an adder network gains exactly its learned equality") {
  TermStore s;
  WallaceSpec spec;
  spec.width = 3;
  spec.satisfiable = true;
  Script script = gen_wallace(s, spec);

  auto [out, report] = preprocess(s, script);
  // interior sub-concatenations parse as adder trees but their product
  // arrays are unfactorable, so only the full output contributes
  REQUIRE(report.entries.size() == 1);
  CHECK(report.entries[0].source == MatchSource::Wallace);
  CHECK(report.entries[0].block_width == 1);
  CHECK(report.entries[0].x_width == 5);
  CHECK(report.entries[0].y_width == 5);
  REQUIRE(out.learned.size() == 1);
  CHECK(check_tautology(s, out.learned[0]).status == TautologyStatus::Proved);
}

TEST_CASE("matcher toggles limit the scan") {
  TermStore s1;
  Script lscript = gen_long(s1, LongSpec{});
  PreprocessOptions no_long;
  no_long.long_enabled = false;
  auto [out1, rep1] = preprocess(s1, lscript, no_long);
  CHECK(rep1.assertions_emitted == 0);
  CHECK(out1.learned.empty());

  TermStore s2;
  WallaceSpec wspec;
  Script wscript = gen_wallace(s2, wspec);
  PreprocessOptions no_wallace;
  no_wallace.wallace_enabled = false;
  auto [out2, rep2] = preprocess(s2, wscript, no_wallace);
  CHECK(rep2.assertions_emitted == 0);
  CHECK(out2.learned.empty());
}

TEST_CASE("bare chains are matched only when explicitly allowed") {
  TermStore s;
  LongSpec spec;
  spec.blocks = 2;
  spec.block_width = 3;
  spec.x_pattern = {{BlockTag::Fresh}, {BlockTag::Zero}};
  spec.y_pattern = {{BlockTag::Fresh}, {BlockTag::Zero}};
  Script script = gen_long(s, spec);

  auto [out, report] = preprocess(s, script);
  CHECK(report.assertions_emitted == 0);

  PreprocessOptions opts;
  opts.allow_single_summand = true;
  auto [out2, report2] = preprocess(s, script, opts);
  REQUIRE(report2.entries.size() == 1);
  CHECK(report2.assertions_emitted == 1);
  CHECK(check_tautology(s, out2.learned[0]).status == TautologyStatus::Proved);
}

TEST_CASE("scripts without decomposed products pass through unchanged") {
  TermStore s;
  Script script = parse(s,
                        "(set-logic QF_BV)\n"
                        "(declare-fun x () (_ BitVec 4))\n"
                        "(declare-fun y () (_ BitVec 4))\n"
                        "(declare-fun z () (_ BitVec 4))\n"
                        "(assert (= (bvadd x y) z))\n"
                        "(check-sat)\n");
  auto [out, report] = preprocess(s, script);
  CHECK(report.entries.empty());
  CHECK(report.assertions_emitted == 0);
  CHECK(print(s, out) == print(s, script));
}

TEST_CASE("learned provenance survives a trip through the printer") {
  TermStore s;
  LongSpec spec;
  spec.blocks = 2;
  spec.block_width = 1;
  spec.seed = 3;
  Script script = gen_long(s, spec);
  auto [out, report] = preprocess(s, script);
  REQUIRE(report.assertions_emitted == 1);

  std::string text = print(s, out);
  TermStore s2;
  Script parsed = parse(s2, text);
  REQUIRE(parsed.learned.size() == 1);
  REQUIRE(parsed.learned_meta.size() == 1);
  CHECK(parsed.learned_meta[0].source == MatchSource::Long);
  CHECK(parsed.learned_meta[0].x_width == 3);
  CHECK(parsed.learned_meta[0].y_width == 3);
  CHECK(parsed.assertions.size() == script.assertions.size());

  // the augmented file is a fixed point of preprocessing
  auto [out2, report2] = preprocess(s2, parsed);
  CHECK(report2.assertions_emitted == 0);
  CHECK(print(s2, out2) == print(s2, parsed));

  // one normalizing trip reorders commutative children by the fresh
  // store's ids; after that the text is byte-stable
  std::string text2 = print(s2, parsed);
  TermStore s3;
  Script parsed3 = parse(s3, text2);
  CHECK(print(s3, parsed3) == text2);
}
