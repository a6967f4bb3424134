#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "testutil.hpp"
#include "wcfg/errors.hpp"
#include "wcfg/inside.hpp"
#include "wcfg/transform.hpp"

using namespace wcfg;
using namespace wcfg::test;

namespace {

std::map<RuleOrigin, int> family_counts(const TransformedGrammar& out) {
  std::map<RuleOrigin, int> counts;
  for (const RuleProvenance& p : out.provenance) ++counts[p.origin];
  return counts;
}

}  // namespace

TEST_CASE("glct family counts on the example grammar") {
  Grammar g1 = fixture_g1();
  TransformParams params = g1_params(g1);
  TransformedGrammar out = glct_with_provenance(g1, params);

  auto counts = family_counts(out);
  CHECK(counts[RuleOrigin::recover_frozen] == 4);  // N minus {NP}
  CHECK(counts[RuleOrigin::recover_slash] == 5);   // |N| * |X|
  CHECK(counts[RuleOrigin::slash_base] == 9);      // |V| + |N|
  CHECK(counts[RuleOrigin::slash_step] == 15);     // |P| * |N|
  CHECK(counts[RuleOrigin::frozen_base] == 3);     // |R \ P|
  CHECK(counts[RuleOrigin::frozen_step] == 1);     // corner of r1 not in X
  CHECK(out.grammar.rule_count() == 37);
  CHECK(rule_count_bound(g1, params) == 39);
  CHECK(out.grammar.rule_count() <= rule_count_bound(g1, params));

  // Output tuple basics: same start, same terminals, superset nonterminals.
  CHECK(out.grammar.start() == g1.start());
  CHECK(out.grammar.terminals() == g1.terminals());
  for (const Symbol& s : g1.nonterminals()) {
    CHECK(out.grammar.has_nonterminal(s));
  }
}

TEST_CASE("glct with empty parameters is a frozen renaming") {
  Grammar g1 = fixture_g1();
  TransformParams params = TransformParams::make(g1, {}, {});
  TransformedGrammar out = glct_with_provenance(g1, params);
  auto counts = family_counts(out);
  CHECK(counts[RuleOrigin::recover_frozen] == 5);
  CHECK(counts[RuleOrigin::recover_slash] == 0);
  CHECK(counts[RuleOrigin::slash_base] == 9);
  CHECK(counts[RuleOrigin::slash_step] == 0);
  CHECK(counts[RuleOrigin::frozen_base] == 6);
  CHECK(counts[RuleOrigin::frozen_step] == 0);

  // After trimming: each original rule survives under its frozen name.
  Grammar t = trim(out.grammar);
  for (const Rule& r : g1.rules()) {
    bool found = false;
    for (const Rule& o : t.rules()) {
      if (o.lhs == params.frozen(r.lhs) && o.rhs == r.rhs) found = true;
    }
    CHECK(found);
  }
  CHECK(equivalence_check(g1, t, 5).equivalent);
}

TEST_CASE("glct weight transfer") {
  Grammar g1 = fixture_g1(Semiring::real());
  std::vector<Rule> rules(g1.rules().begin(), g1.rules().end());
  rules[2].weight = 0.25;  // PossP -> NP 's
  Grammar g(Semiring::real(), nt("S"), rules);
  TransformParams params = TransformParams::make(g, {0, 1, 2}, {nt("NP")});
  TransformedGrammar out = glct_with_provenance(g, params);
  for (std::size_t i = 0; i < out.grammar.rule_count(); ++i) {
    const Rule& r = out.grammar.rule(i);
    switch (out.provenance[i].origin) {
      case RuleOrigin::recover_frozen:
      case RuleOrigin::recover_slash:
      case RuleOrigin::slash_base:
        CHECK(r.weight == 1.0);
        break;
      default:
        CHECK(r.weight == g.rule(out.provenance[i].source_rule).weight);
    }
    if (out.provenance[i].origin == RuleOrigin::slash_step &&
        out.provenance[i].source_rule == 2) {
      CHECK(r.weight == 0.25);
    }
  }
}

TEST_CASE("invalid parameters are rejected") {
  Grammar g1 = fixture_g1();
  CHECK_THROWS_AS((void)TransformParams::make(g1, {99}, {}), Error);
  CHECK_THROWS_AS((void)TransformParams::make(g1, {}, {nt("Nope")}), Error);

  std::vector<Rule> rules(g1.rules().begin(), g1.rules().end());
  rules.push_back(Rule{nt("E"), {}, 1.0});
  Grammar with_eps(Semiring::boolean(), nt("S"), rules);
  CHECK_THROWS_AS((void)TransformParams::make(with_eps, {6}, {}), Error);
  CHECK_THROWS_AS((void)lct_params(with_eps), Error);  // P would include it
}

TEST_CASE("speculation differs from glct only in the slash step") {
  Grammar g1 = fixture_g1();
  TransformParams params = g1_params(g1);
  TransformedGrammar spec = speculate_with_provenance(g1, params);

  auto counts = family_counts(spec);
  CHECK(counts[RuleOrigin::slash_step] == 27);  // |P| * |V u N| = 3 * 9
  CHECK(counts[RuleOrigin::recover_frozen] == 4);
  CHECK(counts[RuleOrigin::recover_slash] == 5);
  CHECK(counts[RuleOrigin::slash_base] == 9);
  CHECK(counts[RuleOrigin::frozen_base] == 3);
  CHECK(counts[RuleOrigin::frozen_step] == 1);

  // Two advertised members of the slash-step family.
  auto has_rule = [&](const Rule& want) {
    for (const Rule& r : spec.grammar.rules()) {
      if (r.lhs == want.lhs && r.rhs == want.rhs && r.weight == want.weight) {
        return true;
      }
    }
    return false;
  };
  Symbol np = nt("NP");
  CHECK(has_rule(Rule{params.slashed(nt("S"), np),
                      {params.slashed(np, np), nt("VP")},
                      1.0}));
  CHECK(has_rule(Rule{params.slashed(nt("PossP"), np),
                      {params.slashed(np, np), term("'s")},
                      1.0}));
}

TEST_CASE("speculation with empty P equals glct") {
  Grammar g1 = fixture_g1();
  TransformParams params = TransformParams::make(g1, {}, {nt("NP")});
  Grammar a = glct(g1, params);
  Grammar b = speculate(g1, params);
  CHECK(a.rules() == b.rules());
  CHECK(a.start() == b.start());
}

TEST_CASE("lct and slct are glct special cases") {
  Grammar g1 = fixture_g1();
  Grammar via_lct = lct(g1);
  TransformParams all = lct_params(g1);
  // Same shape modulo the fresh instance id.
  CHECK(grammars_equal(via_lct, glct(g1, lct_params(g1))));

  // After trimming, only slash recovery, slash rules and terminal-frozen
  // recovery instances survive.
  Grammar t = trim(via_lct);
  for (const Rule& r : t.rules()) {
    bool recovery = r.rhs.size() == 2 && r.rhs[0].is_terminal() &&
                    r.rhs[1].kind() == Symbol::Kind::slashed;
    bool slash_lhs = r.lhs.kind() == Symbol::Kind::slashed;
    CHECK((recovery || slash_lhs));
  }

  // slct with empty P trims to the frozen copy.
  Grammar s0 = trim(slct(g1, {}));
  CHECK(equivalence_check(g1, s0, 5).equivalent);
}

TEST_CASE("filtered glct emits a subset with equal trim") {
  Grammar g1 = fixture_g1();
  TransformParams params = g1_params(g1);
  Grammar full = glct(g1, params);
  Grammar filtered = glct_filtered(g1, params);

  CHECK(filtered.rule_count() < full.rule_count());
  for (const Rule& r : filtered.rules()) {
    bool found = false;
    for (const Rule& o : full.rules()) {
      if (o.lhs == r.lhs && o.rhs == r.rhs && o.weight == r.weight) {
        found = true;
      }
    }
    CHECK(found);
  }
  Grammar ta = trim(full);
  Grammar tb = trim(filtered);
  CHECK(canonicalized(ta).rules() == canonicalized(tb).rules());
}

TEST_CASE("filtered glct on random instances") {
  std::mt19937 rng(404);
  for (int i = 0; i < 25; ++i) {
    GrammarGenOptions opt;
    opt.semiring = Semiring::real();
    opt.random_weights = true;
    Grammar g = random_grammar(rng, opt);
    TransformParams params = random_params(rng, g);
    TransformedGrammar full = glct_with_provenance(g, params);
    TransformedGrammar filt = glct_filtered_with_provenance(g, params);
    CHECK(filt.grammar.rule_count() <= full.grammar.rule_count());
    CHECK(canonicalized(trim(full.grammar)).rules() ==
          canonicalized(trim(filt.grammar)).rules());
  }
}

TEST_CASE("prop-3 bound holds on random instances") {
  std::mt19937 rng(505);
  for (int i = 0; i < 30; ++i) {
    GrammarGenOptions opt;
    opt.allow_nullary = true;
    opt.require_nonempty = false;
    Grammar g = random_grammar(rng, opt);
    TransformParams params = random_params(rng, g);
    Grammar out = glct(g, params);
    CHECK(out.rule_count() <= rule_count_bound(g, params));
  }
}
