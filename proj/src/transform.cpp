#include "wcfg/transform.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "wcfg/errors.hpp"
#include "wcfg/io.hpp"

namespace wcfg {

TransformParams TransformParams::make(const Grammar& g,
                                      std::vector<std::size_t> rule_indices,
                                      std::vector<Symbol> corner_symbols) {
  return make_with_id(g, std::move(rule_indices), std::move(corner_symbols),
                      fresh_transform_id());
}

TransformParams TransformParams::make_with_id(
    const Grammar& g, std::vector<std::size_t> rule_indices,
    std::vector<Symbol> corner_symbols, TransformId id) {
  note_transform_id(id);
  TransformParams params;
  params.p_ = std::move(rule_indices);
  params.x_ = std::move(corner_symbols);
  params.id_ = id;
  std::sort(params.p_.begin(), params.p_.end());
  params.p_.erase(std::unique(params.p_.begin(), params.p_.end()),
                  params.p_.end());
  std::sort(params.x_.begin(), params.x_.end());
  params.x_.erase(std::unique(params.x_.begin(), params.x_.end()),
                  params.x_.end());
  for (std::size_t i : params.p_) {
    if (i >= g.rule_count()) {
      raise(Errc::invalid_params,
            "rule index " + std::to_string(i) + " out of range");
    }
    if (g.rule(i).is_nullary()) {
      raise(Errc::invalid_params,
            "rule " + std::to_string(i) +
                " is nullary; left-corner recognition rules must not be");
    }
  }
  for (const Symbol& s : params.x_) {
    if (!g.has_symbol(s)) {
      raise(Errc::invalid_params,
            "corner symbol " + symbol_to_string(s) + " is not in the grammar");
    }
  }
  return params;
}

bool TransformParams::in_p(std::size_t rule_index) const {
  return std::binary_search(p_.begin(), p_.end(), rule_index);
}

bool TransformParams::in_x(const Symbol& s) const {
  return std::binary_search(x_.begin(), x_.end(), s);
}

namespace {

std::vector<Symbol> all_symbols(const Grammar& g) {
  std::vector<Symbol> out;
  out.reserve(g.terminals().size() + g.nonterminals().size());
  std::merge(g.terminals().begin(), g.terminals().end(),
             g.nonterminals().begin(), g.nonterminals().end(),
             std::back_inserter(out));
  return out;
}

// Optional per-family filters used by the filtered variant; the unfiltered
// transform passes predicates that accept everything.
struct Filters {
  // recover_frozen: X -> ~X
  std::function<bool(const Symbol& x)> recover_frozen = [](const Symbol&) {
    return true;
  };
  // recover_slash: X -> ~a X/a
  std::function<bool(const Symbol& x, const Symbol& a)> recover_slash =
      [](const Symbol&, const Symbol&) { return true; };
  // slash_base: X/X -> empty
  std::function<bool(const Symbol& x)> slash_base = [](const Symbol&) {
    return true;
  };
  // slash_step: Y/a -> b... Y/X from rule (X -> a b...)
  std::function<bool(const Symbol& y, const Symbol& a)> slash_step =
      [](const Symbol&, const Symbol&) { return true; };
};

TransformedGrammar corner_transform(const Grammar& g,
                                    const TransformParams& params,
                                    bool speculation, const Filters& filters) {
  const Semiring& s = g.semiring();
  const auto& nts = g.nonterminals();
  std::vector<Symbol> vocab = all_symbols(g);

  std::vector<Rule> rules;
  std::vector<RuleProvenance> prov;
  auto emit = [&](Symbol lhs, std::vector<Symbol> rhs, Weight w,
                  RuleOrigin origin, int source) {
    rules.push_back(Rule{std::move(lhs), std::move(rhs), w});
    prov.push_back(RuleProvenance{origin, source});
  };

  // Recovery rules rebuild the original nonterminals: X -> ~X covers the
  // derivations with no left corner, X -> ~a X/a splits off a hoisted corner
  // labeled a.
  for (const Symbol& x : nts) {
    if (params.in_x(x)) continue;
    if (!filters.recover_frozen(x)) continue;
    emit(x, {params.frozen(x)}, s.one(), RuleOrigin::recover_frozen, -1);
  }
  for (const Symbol& x : nts) {
    for (const Symbol& a : params.corner_symbols()) {
      if (!filters.recover_slash(x, a)) continue;
      emit(x, {params.frozen(a), params.slashed(x, a)}, s.one(),
           RuleOrigin::recover_slash, -1);
    }
  }

  // Slashed nonterminals: base case X/X -> empty, then one step per
  // recognition rule.
  for (const Symbol& x : vocab) {
    if (!filters.slash_base(x)) continue;
    emit(params.slashed(x, x), {}, s.one(), RuleOrigin::slash_base, -1);
  }
  for (std::size_t r : params.rule_indices()) {
    const Rule& rule = g.rule(r);
    const Symbol& corner = rule.rhs[0];
    std::vector<Symbol> rest(rule.rhs.begin() + 1, rule.rhs.end());
    if (speculation) {
      // X/Y -> a/Y b... : the recursion stays on the left, the denominator
      // is passed down, and Y may be a terminal.
      for (const Symbol& y : vocab) {
        if (!filters.slash_step(rule.lhs, y)) continue;
        std::vector<Symbol> rhs;
        rhs.reserve(rest.size() + 1);
        rhs.push_back(params.slashed(corner, y));
        rhs.insert(rhs.end(), rest.begin(), rest.end());
        emit(params.slashed(rule.lhs, y), std::move(rhs), rule.weight,
             RuleOrigin::slash_step, static_cast<int>(r));
      }
    } else {
      // Y/a -> b... Y/X : the slashed nonterminal moves to the right, which
      // is what turns left recursion into right recursion.
      for (const Symbol& y : nts) {
        if (!filters.slash_step(y, corner)) continue;
        std::vector<Symbol> rhs(rest);
        rhs.push_back(params.slashed(y, rule.lhs));
        emit(params.slashed(y, corner), std::move(rhs), rule.weight,
             RuleOrigin::slash_step, static_cast<int>(r));
      }
    }
  }

  // Frozen nonterminals: ~X derives exactly the X derivations without a
  // left corner.  Non-recognition rules transfer verbatim; recognition
  // rules whose corner slot is not a recognition symbol freeze it.
  for (std::size_t r = 0; r < g.rule_count(); ++r) {
    if (params.in_p(r)) continue;
    const Rule& rule = g.rule(r);
    emit(params.frozen(rule.lhs), rule.rhs, rule.weight,
         RuleOrigin::frozen_base, static_cast<int>(r));
  }
  for (std::size_t r : params.rule_indices()) {
    const Rule& rule = g.rule(r);
    const Symbol& corner = rule.rhs[0];
    if (params.in_x(corner)) continue;
    std::vector<Symbol> rhs;
    rhs.reserve(rule.rhs.size());
    rhs.push_back(params.frozen(corner));
    rhs.insert(rhs.end(), rule.rhs.begin() + 1, rule.rhs.end());
    emit(params.frozen(rule.lhs), std::move(rhs), rule.weight,
         RuleOrigin::frozen_step, static_cast<int>(r));
  }

  Grammar out(s, g.start(), std::move(rules), nts, g.terminals());
  return TransformedGrammar{std::move(out), std::move(prov)};
}

}  // namespace

TransformedGrammar glct_with_provenance(const Grammar& g,
                                        const TransformParams& params) {
  return corner_transform(g, params, /*speculation=*/false, Filters{});
}

Grammar glct(const Grammar& g, const TransformParams& params) {
  return glct_with_provenance(g, params).grammar;
}

TransformedGrammar speculate_with_provenance(const Grammar& g,
                                             const TransformParams& params) {
  return corner_transform(g, params, /*speculation=*/true, Filters{});
}

Grammar speculate(const Grammar& g, const TransformParams& params) {
  return speculate_with_provenance(g, params).grammar;
}

namespace {

// Reachability over the left-recursion graph restricted to the recognition
// rules: one edge per rule in P from its left-hand side to its leftmost
// right-hand symbol.  reach[x] holds the set of symbols reachable from x
// (reflexively).
class PReach {
 public:
  PReach(const Grammar& g, const TransformParams& params) {
    std::vector<Symbol> vocab = all_symbols(g);
    for (std::size_t i = 0; i < vocab.size(); ++i) index_[vocab[i]] = i;
    adj_.assign(vocab.size(), {});
    for (std::size_t r : params.rule_indices()) {
      adj_[index_.at(g.rule(r).lhs)].push_back(index_.at(g.rule(r).rhs[0]));
    }
    reach_.assign(vocab.size(), {});
    for (std::size_t v = 0; v < vocab.size(); ++v) {
      std::vector<bool>& seen = reach_[v];
      seen.assign(vocab.size(), false);
      std::vector<std::size_t> stack{v};
      seen[v] = true;
      while (!stack.empty()) {
        std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t w : adj_[u]) {
          if (!seen[w]) {
            seen[w] = true;
            stack.push_back(w);
          }
        }
      }
    }
  }

  bool reaches(const Symbol& from, const Symbol& to) const {
    auto i = index_.find(from);
    auto j = index_.find(to);
    if (i == index_.end() || j == index_.end()) return false;
    return reach_[i->second][j->second];
  }

  bool reaches_any(const Symbol& from, const std::vector<Symbol>& to) const {
    for (const Symbol& t : to) {
      if (reaches(from, t)) return true;
    }
    return false;
  }

 private:
  std::map<Symbol, std::size_t> index_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::vector<bool>> reach_;
};

}  // namespace

TransformedGrammar glct_filtered_with_provenance(const Grammar& g,
                                                 const TransformParams& params) {
  // Retained nonterminals: the start symbol, anything in a non-corner
  // position of a recognition rule, and anything on the right-hand side of a
  // non-recognition rule.  Slashed symbols with other numerators can never
  // feed a surviving derivation.
  std::set<Symbol> retained;
  retained.insert(g.start());
  for (std::size_t r = 0; r < g.rule_count(); ++r) {
    const Rule& rule = g.rule(r);
    std::size_t first = params.in_p(r) ? 1 : 0;
    for (std::size_t t = first; t < rule.rhs.size(); ++t) {
      retained.insert(rule.rhs[t]);
    }
  }
  auto is_retained = [&](const Symbol& s) { return retained.count(s) > 0; };

  PReach reach(g, params);
  const auto& corners = params.corner_symbols();

  Filters filters;
  filters.recover_frozen = is_retained;
  filters.recover_slash = [&](const Symbol& x, const Symbol& a) {
    return is_retained(x) && reach.reaches(x, a);
  };
  filters.slash_base = [&](const Symbol& x) {
    return is_retained(x) && reach.reaches_any(x, corners);
  };
  filters.slash_step = [&](const Symbol& y, const Symbol& a) {
    return is_retained(y) && reach.reaches(y, a) &&
           reach.reaches_any(a, corners);
  };
  return corner_transform(g, params, /*speculation=*/false, filters);
}

Grammar glct_filtered(const Grammar& g, const TransformParams& params) {
  return glct_filtered_with_provenance(g, params).grammar;
}

TransformParams lct_params(const Grammar& g) {
  std::vector<std::size_t> all(g.rule_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return TransformParams::make(g, std::move(all), all_symbols(g));
}

TransformParams slct_params(const Grammar& g,
                            std::vector<std::size_t> rule_indices) {
  return TransformParams::make(g, std::move(rule_indices), all_symbols(g));
}

Grammar lct(const Grammar& g) { return glct(g, lct_params(g)); }

Grammar slct(const Grammar& g, std::vector<std::size_t> rule_indices) {
  return glct(g, slct_params(g, std::move(rule_indices)));
}

std::size_t rule_count_bound(const Grammar& g, const TransformParams& params) {
  std::size_t n = g.nonterminals().size();
  std::size_t v = g.terminals().size();
  std::size_t x = params.corner_symbols().size();
  std::size_t p = params.rule_indices().size();
  std::size_t n_minus_x = 0;
  for (const Symbol& sym : g.nonterminals()) {
    if (!params.in_x(sym)) ++n_minus_x;
  }
  return g.rule_count() + n * (1 + x + p) + n_minus_x + v;
}

}  // namespace wcfg
