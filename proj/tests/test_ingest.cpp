#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "testutil.hpp"
#include "wcfg/errors.hpp"
#include "wcfg/ingest.hpp"
#include "wcfg/io.hpp"

using namespace wcfg;
using namespace wcfg::test;

TEST_CASE("treebank reading") {
  Treebank tb = parse_treebank("(S (NP 'a') (VP 'b'))\n");
  REQUIRE(tb.trees.size() == 1);
  CHECK(tb.trees[0].label == "S");
  CHECK(tb.trees[0].children.size() == 2);

  CHECK(parse_treebank("").trees.empty());
  CHECK_THROWS_AS((void)parse_treebank("(S (NP 'a')"), Error);

  // Multi-line blocks and bare word leaves both parse.
  Treebank ptb = parse_treebank(
      "(S\n  (NP (DT the) (NN dog))\n  (VP barks))\n(S (NP it) (VP ran))\n");
  CHECK(ptb.trees.size() == 2);
  CHECK(ptb.trees[0].children[0].children[0].children[0].leaf);
}

TEST_CASE("mle extraction on a uniform treebank") {
  Treebank tb = parse_treebank("(S (A 'a') (B 'b'))\n(S (A 'a') (B 'b'))\n");
  Grammar g = extract_grammar(tb);
  CHECK(g.start() == nt("S"));
  REQUIRE(g.rule_count() == 3);
  for (const Rule& r : g.rules()) CHECK(r.weight == 1.0);
  CHECK(g.semiring().kind() == Semiring::Kind::real);
}

TEST_CASE("unary chains collapse before counting") {
  // X -> Y -> Z -> leaves collapses to X -> leaves.
  Treebank tb = parse_treebank("(X (Y (Z 'a' 'b')))\n");
  Grammar g = extract_grammar(tb);
  REQUIRE(g.rule_count() == 1);
  CHECK(g.rule(0).lhs == nt("X"));
  CHECK(g.rule(0).rhs == std::vector<Symbol>{term("a"), term("b")});

  // Chains of length one collapse too; preterminals stay.
  Treebank tb2 = parse_treebank("(S (A (B 'b')))\n");
  Grammar g2 = extract_grammar(tb2);
  REQUIRE(g2.rule_count() == 1);
  CHECK(g2.rule(0).lhs == nt("S"));
  CHECK(g2.rule(0).rhs == std::vector<Symbol>{term("b")});
  CHECK(!g2.has_nonterminal_unary_rule());
}

TEST_CASE("mle weights are conditional frequencies") {
  Treebank tb = parse_treebank(
      "(S (A 'a') (B 'b'))\n"
      "(S (A 'x') (B 'b'))\n"
      "(S (A 'a') (B 'b'))\n");
  Grammar g = extract_grammar(tb);
  std::map<std::string, Weight> weights;
  for (const Rule& r : g.rules()) {
    weights[r.rhs[0].name()] += r.lhs == nt("A") ? r.weight : 0.0;
  }
  CHECK(weights["a"] == doctest::Approx(2.0 / 3));
  CHECK(weights["x"] == doctest::Approx(1.0 / 3));

  // Per left-hand side, weights sum to one.
  std::map<Symbol, Weight> totals;
  for (const Rule& r : g.rules()) totals[r.lhs] += r.weight;
  for (const auto& [lhs, total] : totals) {
    CHECK(std::fabs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("majority root wins, ties break lexicographically") {
  Treebank tb = parse_treebank(
      "(S (A 'a'))\n(TOP (A 'a'))\n(S (A 'a'))\n");
  ExtractResult res = extract_grammar_full(tb);
  CHECK(res.grammar.start() == nt("S"));
  CHECK(!res.start_tie_broken);

  Treebank tie = parse_treebank("(B (A 'a'))\n(C (A 'a'))\n");
  ExtractResult res2 = extract_grammar_full(tie);
  CHECK(res2.grammar.start() == nt("B"));
  CHECK(res2.start_tie_broken);
}

TEST_CASE("annotation stripping") {
  Treebank tb = parse_treebank("(S (NP-SBJ (NN=2 'dog')) (VP##x 'ran'))\n");
  ExtractOptions opt;
  opt.strip_annotations = true;
  Grammar g = extract_grammar(tb, opt);
  CHECK(g.has_nonterminal(nt("NP")));
  CHECK(g.has_nonterminal(nt("VP")));
  CHECK(g.has_nonterminal(nt("NN")));
  CHECK(!g.has_nonterminal(nt("NP-SBJ")));

  // Stripping never empties a label.
  Treebank lrb = parse_treebank("(S (-LRB- 'x'))\n");
  Grammar g2 = extract_grammar(lrb, opt);
  CHECK(g2.has_nonterminal(nt("-LRB-")));

  // Explicit delimiter overrides the default set.
  ExtractOptions custom;
  custom.strip_annotations = true;
  custom.delimiter = "##";
  Grammar g3 = extract_grammar(tb, custom);
  CHECK(g3.has_nonterminal(nt("NP-SBJ")));
  CHECK(g3.has_nonterminal(nt("VP")));
}

TEST_CASE("nullary treebanks are rejected with the offending trees") {
  Treebank tb = parse_treebank("(S (A 'a'))\n(S (A))\n");
  try {
    (void)extract_grammar(tb);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::nullary_in_treebank);
    CHECK(std::string(e.what()).find('1') != std::string::npos);
  }
  CHECK_THROWS_AS((void)extract_grammar(Treebank{}), Error);
}

TEST_CASE("extraction is deterministic") {
  std::string text =
      "(S (NP 'dogs') (VP 'bark'))\n"
      "(S (NP (DT 'the') (NN 'dog')) (VP 'barks'))\n";
  Grammar a = extract_grammar(parse_treebank(text));
  Grammar b = extract_grammar(parse_treebank(text));
  CHECK(write_wcfg(a) == write_wcfg(b));
  CHECK(a.rules() == b.rules());
}
