#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "testutil.hpp"
#include "wcfg/errors.hpp"
#include "wcfg/inside.hpp"
#include "wcfg/leftrec.hpp"
#include "wcfg/preprocess.hpp"
#include "wcfg/transform.hpp"

using namespace wcfg;
using namespace wcfg::test;

TEST_CASE("matrix star closure satisfies its fixed point") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    Semiring s = (trial % 2 == 0) ? Semiring::boolean() : Semiring::real();
    std::size_t n = 1 + trial % 5;
    WeightMatrix m(n, s);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.4) {
          m.at(i, j) = (s.kind() == Semiring::Kind::boolean)
                           ? 1.0
                           : std::uniform_int_distribution<int>(1, 3)(rng) / 8.0;
        }
      }
    }
    WeightMatrix c = star_closure(m, s, Execution::serial);
    // c = I + m c, entrywise.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Weight expect = (i == j) ? s.one() : s.zero();
        for (std::size_t k = 0; k < n; ++k) {
          expect = s.add(expect, s.mul(m.at(i, k), c.at(k, j)));
        }
        CHECK(s.eq(c.at(i, j), expect));
      }
    }
  }
}

TEST_CASE("fixed-point null weights") {
  // Nullary-free: all zero after one round.
  Grammar g1 = fixture_g1(Semiring::real());
  NullWeights nw = null_weights_fixed_point(g1);
  for (Weight w : nw.weights) CHECK(w == 0.0);

  // S -> eps (0.4) | S S (0.6): smallest root of x = 0.4 + 0.6 x^2 is 2/3.
  std::vector<Rule> rules = {{nt("S"), {}, 0.4},
                             {nt("S"), {nt("S"), nt("S")}, 0.6}};
  Grammar quad(Semiring::real(), nt("S"), rules);
  NullWeights q = null_weights_fixed_point(quad);
  CHECK(q.at(nt("S"), quad.semiring()) == doctest::Approx(2.0 / 3).epsilon(1e-9));

  // Boolean chain: S -> A B, A -> eps, B -> eps.
  rules = {{nt("S"), {nt("A"), nt("B")}, 1.0},
           {nt("A"), {}, 1.0},
           {nt("B"), {}, 1.0}};
  Grammar chain(Semiring::boolean(), nt("S"), rules);
  NullWeights c = null_weights_fixed_point(chain);
  CHECK(c.at(nt("S"), chain.semiring()) == 1.0);

  // x = 1 + x^2 has no finite root; the smallest carrier solution is
  // infinity and the iteration settles there.
  rules = {{nt("S"), {}, 1.0}, {nt("S"), {nt("S"), nt("S")}, 1.0}};
  Grammar div(Semiring::real(), nt("S"), rules);
  CHECK(std::isinf(
      null_weights_fixed_point(div, 500).at(nt("S"), div.semiring())));

  // With a tolerance of zero the oscillating approach never stabilizes.
  rules = {{nt("S"), {}, 0.4}, {nt("S"), {nt("S"), nt("S")}, 0.6}};
  Grammar slow(Semiring::real(), nt("S"), rules);
  CHECK_THROWS_AS((void)null_weights_fixed_point(slow, 50, 0.0), Error);
}

TEST_CASE("fixed-point iterates grow monotonically") {
  std::vector<Rule> rules = {{nt("S"), {}, 0.4},
                             {nt("S"), {nt("S"), nt("S")}, 0.6}};
  Grammar quad(Semiring::real(), nt("S"), rules);
  Weight prev = -1.0;
  for (int iters = 1; iters <= 40; iters += 4) {
    // Run the iteration with a coarse tolerance and few rounds; the partial
    // values must never decrease.
    try {
      NullWeights nw = null_weights_fixed_point(quad, iters, 0.0);
      (void)nw;
    } catch (const Error&) {
      // expected: tolerance 0 never converges; inspect via a looser run
    }
    NullWeights nw = null_weights_fixed_point(quad, iters, 1.0);
    Weight cur = nw.at(nt("S"), quad.semiring());
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("fast null weights on the example transform output") {
  Grammar g1 = fixture_g1();
  TransformParams params = g1_params(g1);
  Grammar out = glct(g1, params);
  NullWeights fast = null_weights_glct(out);

  // Exactly the nine X/X symbols carry weight one; everything else zero.
  std::size_t ones = 0;
  for (std::size_t i = 0; i < fast.symbols.size(); ++i) {
    const Symbol& sym = fast.symbols[i];
    if (sym.kind() == Symbol::Kind::slashed &&
        sym.numerator() == sym.denominator()) {
      CHECK(fast.weights[i] == 1.0);
      ++ones;
    } else {
      CHECK(fast.weights[i] == 0.0);
    }
  }
  CHECK(ones == 9);
}

TEST_CASE("fast null weights pick up unary recognition rules") {
  // P = {A -> B}: the slashed system gains Y/B -> Y/A steps of weight w.
  std::vector<Rule> rules = {{nt("A"), {nt("B")}, 0.5},
                             {nt("B"), {term("b")}, 1.0},
                             {nt("S"), {nt("A"), nt("B")}, 1.0}};
  Grammar g(Semiring::real(), nt("S"), rules);
  TransformParams params = TransformParams::make(g, {0}, {nt("B")});
  Grammar out = glct(g, params);
  NullWeights fast = null_weights_glct(out);
  // A/B -> A/A (0.5) and A/A -> eps give null weight 0.5.
  CHECK(fast.at(params.slashed(nt("A"), nt("B")), g.semiring()) ==
        doctest::Approx(0.5));
  CHECK(fast.at(params.slashed(nt("A"), nt("A")), g.semiring()) == 1.0);
}

TEST_CASE("fast path agrees with the fixed point on random outputs") {
  std::mt19937 rng(77);
  for (int i = 0; i < 25; ++i) {
    GrammarGenOptions opt;
    opt.semiring = Semiring::real();
    opt.random_weights = true;
    opt.allow_nt_unary = true;  // puts unary rules into P sometimes
    Grammar g = random_grammar(rng, opt);
    TransformParams params = random_params(rng, g);
    Grammar out = glct(g, params);
    NullWeights fast = null_weights_glct(out);
    NullWeights slow = null_weights_fixed_point(out);
    REQUIRE(fast.symbols == slow.symbols);
    for (std::size_t k = 0; k < fast.symbols.size(); ++k) {
      CHECK(std::fabs(fast.weights[k] - slow.weights[k]) <= 1e-10);
    }
  }
}

TEST_CASE("fast path rejects non-transform shapes") {
  std::vector<Rule> rules = {{nt("S"), {}, 0.5},
                             {nt("S"), {term("a")}, 0.5}};
  Grammar g(Semiring::real(), nt("S"), rules);
  CHECK_THROWS_AS((void)null_weights_glct(g), Error);
}

TEST_CASE("nullary elimination") {
  // Unchanged when already nullary-free.
  Grammar g1 = fixture_g1(Semiring::real());
  Grammar same = eliminate_nullary(g1);
  CHECK(same.rules() == g1.rules());

  // The slashed empty base folds into its consumers.
  TransformParams params = g1_params(g1);
  Grammar out = trim(glct(g1, params));
  NullaryElimination folded = eliminate_nullary_full(out);
  CHECK(!folded.grammar.has_nullary_rule());
  CHECK(folded.empty_weight == 0.0);
  bool found = false;
  for (const Rule& r : folded.grammar.rules()) {
    if (r.lhs == params.slashed(nt("S"), nt("NP")) &&
        r.rhs == std::vector<Symbol>{nt("VP")}) {
      found = true;
      CHECK(r.weight == 1.0);
    }
    // The empty base is gone and no rule mentions S/S anymore.
    CHECK(r.lhs != params.slashed(nt("S"), nt("S")));
    for (const Symbol& s : r.rhs) CHECK(s != params.slashed(nt("S"), nt("S")));
  }
  CHECK(found);
  CHECK(equivalence_check(out, folded.grammar, 4, /*include_empty=*/false)
            .equivalent);

  // Start null weight is reported, not encoded.
  std::vector<Rule> rules = {{nt("S"), {}, 0.25},
                             {nt("S"), {term("a")}, 0.75}};
  Grammar withe(Semiring::real(), nt("S"), rules);
  NullaryElimination res = eliminate_nullary_full(withe);
  CHECK(res.empty_weight == 0.25);
  CHECK(!res.grammar.has_nullary_rule());
}

TEST_CASE("nullary elimination preserves non-empty strings on random grammars") {
  std::mt19937 rng(88);
  for (int i = 0; i < 20; ++i) {
    GrammarGenOptions opt;
    opt.semiring = Semiring::real();
    opt.random_weights = true;
    opt.allow_nullary = true;
    opt.max_nullary = 2;
    Grammar g = random_grammar(rng, opt);
    Grammar out = eliminate_nullary(g);
    CHECK(!out.has_nullary_rule());
    CHECK(equivalence_check(g, out, 4, /*include_empty=*/false).equivalent);
  }
}

TEST_CASE("unary cycle elimination") {
  // Unchanged when there is nothing to do.
  Grammar g1 = fixture_g1(Semiring::real());
  CHECK(eliminate_unary_cycles(g1).rules() == g1.rules());

  // A -> B -> A cycle of weight 1/4: closure 4/3.
  std::vector<Rule> rules = {{nt("A"), {nt("B")}, 0.5},
                             {nt("B"), {nt("A")}, 0.5},
                             {nt("A"), {term("a")}, 1.0}};
  Grammar cyc(Semiring::real(), nt("A"), rules);
  Grammar out = eliminate_unary_cycles(cyc);
  CHECK(!out.has_nonterminal_unary_rule());
  Weight a_weight = 0, b_weight = 0;
  for (const Rule& r : out.rules()) {
    if (r.lhs == nt("A")) a_weight = r.weight;
    if (r.lhs == nt("B")) b_weight = r.weight;
  }
  CHECK(a_weight == doctest::Approx(4.0 / 3));
  CHECK(b_weight == doctest::Approx(2.0 / 3));

  // Boolean cycles close to true and keep the language ({a} from either
  // nonterminal; the input itself is too cyclic for the chart, so check the
  // output language directly).
  Grammar bcyc(Semiring::boolean(), nt("A"),
               {{nt("A"), {nt("B")}, 1.0},
                {nt("B"), {nt("A")}, 1.0},
                {nt("A"), {term("a")}, 1.0}});
  Grammar bout = eliminate_unary_cycles(bcyc);
  CHECK(!bout.has_nonterminal_unary_rule());
  CHECK(string_weight(bout, nt("A"), terminal_string("a")) == 1.0);
  CHECK(string_weight(bout, nt("B"), terminal_string("a")) == 1.0);
  CHECK(string_weight(bout, nt("A"), terminal_string("a a")) == 0.0);

  // Weight-1 cycles diverge in the real carrier.
  Grammar dcyc(Semiring::real(), nt("A"),
               {{nt("A"), {nt("B")}, 1.0},
                {nt("B"), {nt("A")}, 1.0},
                {nt("A"), {term("a")}, 1.0}});
  CHECK_THROWS_AS((void)eliminate_unary_cycles(dcyc), Error);
}

TEST_CASE("unary elimination preserves the weighted language") {
  std::mt19937 rng(99);
  for (int i = 0; i < 15; ++i) {
    GrammarGenOptions opt;
    opt.semiring = Semiring::real();
    opt.random_weights = true;
    opt.allow_nt_unary = true;
    Grammar g = random_grammar(rng, opt);
    Grammar out = eliminate_unary_cycles(g);
    CHECK(!out.has_nonterminal_unary_rule());
    CHECK(equivalence_check(g, out, 4).equivalent);
  }
}

TEST_CASE("binarization") {
  std::vector<Rule> rules = {
      {nt("X"), {term("a"), term("b"), term("c")}, 0.5},
      {nt("X"), {term("a")}, 0.5},
  };
  Grammar g(Semiring::real(), nt("X"), rules);
  Grammar out = binarize(g);
  REQUIRE(out.rule_count() == 3);
  CHECK(out.rule(0).rhs.size() == 2);
  CHECK(out.rule(0).weight == 0.5);
  CHECK(out.rule(0).rhs[0] == term("a"));
  CHECK(out.rule(1).lhs == out.rule(0).rhs[1]);  // the <'b'.'c'> chain symbol
  CHECK(out.rule(1).rhs == std::vector<Symbol>{term("b"), term("c")});
  CHECK(out.rule(1).weight == 1.0);

  // Already binary: unchanged.
  Grammar g1 = fixture_g1(Semiring::real());
  CHECK(binarize(g1).rules() == g1.rules());

  // Shared suffixes share one chain rule.
  rules = {{nt("X"), {term("a"), term("b"), term("c")}, 1.0},
           {nt("Y"), {term("d"), term("b"), term("c")}, 1.0}};
  Grammar shared(Semiring::real(), nt("X"), rules);
  CHECK(binarize(shared).rule_count() == 3);
}

TEST_CASE("binarization preserves string weights and round-trips as text") {
  std::mt19937 rng(111);
  for (int i = 0; i < 12; ++i) {
    GrammarGenOptions opt;
    opt.semiring = Semiring::real();
    opt.random_weights = true;
    opt.max_arity = 4;
    Grammar g = random_grammar(rng, opt);
    Grammar out = binarize(g);
    for (const Rule& r : out.rules()) CHECK(r.rhs.size() <= 2);
    CHECK(equivalence_check(g, out, 4).equivalent);

    std::string text = write_wcfg(out);
    Grammar back = parse_wcfg(text, Semiring::real());
    CHECK(back.rules() == out.rules());
  }
}

TEST_CASE("pipeline equivalence: binarize after nullary removal") {
  std::mt19937 rng(222);
  for (int i = 0; i < 10; ++i) {
    GrammarGenOptions opt;
    opt.semiring = Semiring::real();
    opt.random_weights = true;
    opt.allow_nullary = true;
    opt.max_arity = 4;
    Grammar g = random_grammar(rng, opt);
    Grammar out = binarize(eliminate_nullary(g));
    CHECK(equivalence_check(g, out, 4, /*include_empty=*/false).equivalent);
  }
}
