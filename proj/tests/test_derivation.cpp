#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"
#include "wcfg/derivation.hpp"
#include "wcfg/errors.hpp"

using namespace wcfg;
using namespace wcfg::test;

TEST_CASE("yield of the example tree") {
  Grammar g1 = fixture_g1();
  DerivPtr t = fig1_left_tree(g1);
  CHECK(yield_string(t) == "my-sister 's diploma arrived");
  CHECK(yield_string(Derivation::leaf(term("a"))) == "a");

  // A childless node over a nullary rule yields the empty string.
  Rule eps{nt("X"), {}, 1.0};
  DerivPtr e = Derivation::node(eps, 0, {});
  CHECK(yield(e).empty());
  CHECK(e->height() == 1);
}

TEST_CASE("weight multiplies the rules of the tree") {
  Semiring real = Semiring::real();
  CHECK(weight(Derivation::leaf(term("a")), real) == 1.0);

  Rule r1{nt("X"), {nt("Y")}, 0.5};
  Rule r2{nt("Y"), {term("a")}, 0.5};
  DerivPtr t = Derivation::node(
      r1, 0, {Derivation::node(r2, 1, {Derivation::leaf(term("a"))})});
  CHECK(weight(t, real) == 0.25);

  Grammar g1 = fixture_g1();
  CHECK(weight(fig1_left_tree(g1), Semiring::boolean()) == 1.0);
}

TEST_CASE("bounded enumeration of the example grammar") {
  Grammar g1 = fixture_g1();
  // Height 4 admits only the flat reading; the recursive one needs height 5.
  auto at4 = enumerate_derivations(g1, nt("S"), 4);
  REQUIRE(at4.size() == 1);
  CHECK(yield_string(at4[0]) == "my-sister arrived");
  auto at5 = enumerate_derivations(g1, nt("S"), 5);
  CHECK(at5.size() == 2);
  bool found_fig1 = false;
  DerivPtr fig1 = fig1_left_tree(g1);
  for (const auto& t : at5) {
    if (same_derivation(t, fig1)) found_fig1 = true;
  }
  CHECK(found_fig1);

  // A terminal root enumerates its single leaf.
  auto leaf = enumerate_derivations(g1, term("arrived"), 3);
  REQUIRE(leaf.size() == 1);
  CHECK(leaf[0]->is_leaf());

  // No rules, no trees.
  Grammar empty(Semiring::boolean(), nt("S"), {});
  CHECK(enumerate_derivations(empty, nt("S"), 6).empty());
}

TEST_CASE("enumerated trees satisfy the weight recursion") {
  std::mt19937 rng(23);
  GrammarGenOptions opt;
  opt.semiring = Semiring::real();
  opt.random_weights = true;
  for (int i = 0; i < 10; ++i) {
    Grammar g = random_grammar(rng, opt);
    for (const auto& t : enumerate_derivations(g, g.start(), 4)) {
      CHECK(derivation_in_grammar(g, t));
      // Unfold the definition: multiply the rule weights along the tree.
      std::vector<DerivPtr> stack{t};
      Weight expect = 1.0;
      while (!stack.empty()) {
        DerivPtr cur = stack.back();
        stack.pop_back();
        if (cur->is_leaf()) continue;
        expect *= cur->rule().weight;
        for (const auto& c : cur->children()) stack.push_back(c);
      }
      CHECK(weight(t, g.semiring()) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("s-expression round trip and binding") {
  Grammar g1 = fixture_g1();
  DerivPtr t = fig1_left_tree(g1);
  LabeledTree lt = to_labeled_tree(t);
  std::string text = sexp_to_string(lt);
  CHECK(text ==
        "(S (NP (PossP (NP 'my-sister') '\\'s') (NN 'diploma')) "
        "(VP 'arrived'))");
  LabeledTree parsed = parse_sexp(text);
  CHECK(parsed == lt);
  SymbolTextContext ctx;
  DerivPtr bound = bind_tree(g1, parsed, ctx);
  CHECK(same_derivation(bound, t));

  // Nullary nodes print and parse with an explicit empty marker.
  Rule eps{nt("X"), {}, 1.0};
  Grammar ge(Semiring::boolean(), nt("X"), {eps});
  DerivPtr e = Derivation::node(ge.rule(0), 0, {});
  CHECK(sexp_to_string(to_labeled_tree(e)) == "(X ε)");
  DerivPtr eb = bind_tree(ge, parse_sexp("(X ε)"), ctx);
  CHECK(same_derivation(eb, e));
}

TEST_CASE("binding rejects foreign trees") {
  Grammar g1 = fixture_g1();
  SymbolTextContext ctx;
  CHECK_THROWS_AS(
      (void)bind_tree(g1, parse_sexp("(S (Q 'what') (VP 'arrived'))"), ctx),
      Error);
  CHECK_THROWS_AS((void)bind_tree(g1, parse_sexp("'unknown-terminal'"), ctx),
                  Error);
}

TEST_CASE("sexp parse errors carry positions") {
  CHECK_THROWS_WITH_AS((void)parse_sexp("(S (NP 'a'"),
                       doctest::Contains("unbalanced"), Error);
  CHECK_THROWS_AS((void)parse_sexp("(S 'a') junk ("), Error);
}
