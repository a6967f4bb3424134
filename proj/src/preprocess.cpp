#include "wcfg/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "wcfg/errors.hpp"
#include "wcfg/io.hpp"

namespace wcfg {

Weight NullWeights::at(const Symbol& s, const Semiring& semiring) const {
  auto it = std::lower_bound(symbols.begin(), symbols.end(), s);
  if (it == symbols.end() || !(*it == s)) return semiring.zero();
  return weights[it - symbols.begin()];
}

NullWeights null_weights_fixed_point(const Grammar& g, int max_iters,
                                     double tol) {
  const Semiring& s = g.semiring();
  NullWeights out;
  out.symbols = g.nonterminals();
  out.weights.assign(out.symbols.size(), s.zero());

  auto index = [&](const Symbol& sym) {
    auto it = std::lower_bound(out.symbols.begin(), out.symbols.end(), sym);
    return static_cast<std::size_t>(it - out.symbols.begin());
  };
  std::vector<std::size_t> lhs_ids(g.rule_count());
  std::vector<std::vector<int>> rhs_ids(g.rule_count());
  for (std::size_t r = 0; r < g.rule_count(); ++r) {
    lhs_ids[r] = index(g.rule(r).lhs);
    for (const Symbol& sym : g.rule(r).rhs) {
      // Terminals contribute zero to every empty-yield derivation.
      rhs_ids[r].push_back(sym.is_terminal() ? -1
                                             : static_cast<int>(index(sym)));
    }
  }

  for (int iter = 0; iter < max_iters; ++iter) {
    std::vector<Weight> next(out.symbols.size(), s.zero());
    for (std::size_t r = 0; r < g.rule_count(); ++r) {
      Weight w = g.rule(r).weight;
      for (int id : rhs_ids[r]) {
        if (id < 0) {
          w = s.zero();
          break;
        }
        w = s.mul(w, out.weights[id]);
        if (w == s.zero()) break;
      }
      next[lhs_ids[r]] = s.add(next[lhs_ids[r]], w);
    }
    bool converged = true;
    for (std::size_t i = 0; i < next.size(); ++i) {
      Weight a = out.weights[i], b = next[i];
      if (a == b) continue;
      if (std::isinf(a) || std::isinf(b) || std::fabs(a - b) > tol) {
        converged = false;
        break;
      }
    }
    out.weights.swap(next);
    if (converged) return out;
  }
  raise(Errc::no_convergence,
        "null weights did not converge in " + std::to_string(max_iters) +
            " iterations");
}

NullWeights null_weights_glct(const Grammar& g, Execution exec) {
  const Semiring& s = g.semiring();
  for (std::size_t r = 0; r < g.rule_count(); ++r) {
    const Rule& rule = g.rule(r);
    if (rule.is_nullary() && rule.lhs.kind() != Symbol::Kind::slashed) {
      raise(Errc::not_glct_shape,
            "nullary rule with non-slashed left-hand side: " +
                symbol_to_string(rule.lhs));
    }
  }

  // The system couples slashed symbols through the unary slashed-to-slashed
  // rules; everything else has null weight zero.  Solve per connected block.
  std::vector<Symbol> slashed;
  for (const Symbol& sym : g.nonterminals()) {
    if (sym.kind() == Symbol::Kind::slashed) slashed.push_back(sym);
  }
  auto id_of = [&](const Symbol& sym) -> int {
    auto it = std::lower_bound(slashed.begin(), slashed.end(), sym);
    if (it == slashed.end() || !(*it == sym)) return -1;
    return static_cast<int>(it - slashed.begin());
  };

  const std::size_t n = slashed.size();
  std::vector<int> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };

  struct UnaryEdge {
    int from, to;
    Weight w;
  };
  std::vector<UnaryEdge> edges;
  std::vector<Weight> base(n, s.zero());
  for (std::size_t r = 0; r < g.rule_count(); ++r) {
    const Rule& rule = g.rule(r);
    int lhs = id_of(rule.lhs);
    if (lhs < 0) continue;
    if (rule.is_nullary()) {
      base[lhs] = s.add(base[lhs], rule.weight);
    } else if (rule.rhs.size() == 1 &&
               rule.rhs[0].kind() == Symbol::Kind::slashed) {
      int rhs = id_of(rule.rhs[0]);
      if (rhs >= 0) {
        edges.push_back({lhs, rhs, rule.weight});
        parent[find(lhs)] = find(rhs);
      }
    }
  }

  std::map<int, std::vector<int>> blocks;
  for (std::size_t i = 0; i < n; ++i) {
    blocks[find(static_cast<int>(i))].push_back(static_cast<int>(i));
  }

  NullWeights out;
  out.symbols = g.nonterminals();
  out.weights.assign(out.symbols.size(), s.zero());
  auto out_index = [&](const Symbol& sym) {
    auto it = std::lower_bound(out.symbols.begin(), out.symbols.end(), sym);
    return static_cast<std::size_t>(it - out.symbols.begin());
  };

  std::vector<int> local(n, -1);
  for (const auto& [root, members] : blocks) {
    for (std::size_t k = 0; k < members.size(); ++k) local[members[k]] = k;
    WeightMatrix w(members.size(), s);
    for (const UnaryEdge& e : edges) {
      if (find(e.from) != root) continue;
      Weight& cell = w.at(local[e.from], local[e.to]);
      cell = s.add(cell, e.w);
    }
    WeightMatrix closure = star_closure(w, s, exec);
    std::vector<Weight> v(members.size());
    for (std::size_t k = 0; k < members.size(); ++k) v[k] = base[members[k]];
    std::vector<Weight> solved = mat_vec(closure, v, s);
    for (std::size_t k = 0; k < members.size(); ++k) {
      out.weights[out_index(slashed[members[k]])] = solved[k];
    }
  }
  return out;
}

namespace {

struct NullaryAnalysis {
  std::vector<bool> nullable;         // per nonterminal index
  std::vector<bool> derives_nonempty; // per nonterminal index
  NullWeights nulls;
};

NullaryAnalysis analyze_nullary(const Grammar& g) {
  NullaryAnalysis a;
  a.nulls = null_weights_fixed_point(g);
  const std::size_t n = a.nulls.symbols.size();
  a.nullable.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.nullable[i] = a.nulls.weights[i] != g.semiring().zero();
  }
  auto index = [&](const Symbol& sym) {
    auto it =
        std::lower_bound(a.nulls.symbols.begin(), a.nulls.symbols.end(), sym);
    return static_cast<std::size_t>(it - a.nulls.symbols.begin());
  };

  a.derives_nonempty.assign(n, false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t r = 0; r < g.rule_count(); ++r) {
      const Rule& rule = g.rule(r);
      std::size_t lhs = index(rule.lhs);
      if (a.derives_nonempty[lhs] || rule.rhs.empty()) continue;
      bool all_derive_something = true, one_nonempty = false;
      for (const Symbol& sym : rule.rhs) {
        if (sym.is_terminal()) {
          one_nonempty = true;
          continue;
        }
        std::size_t i = index(sym);
        if (a.derives_nonempty[i]) {
          one_nonempty = true;
        } else if (!a.nullable[i]) {
          all_derive_something = false;
          break;
        }
      }
      if (all_derive_something && one_nonempty) {
        a.derives_nonempty[lhs] = true;
        changed = true;
      }
    }
  }
  return a;
}

}  // namespace

NullaryElimination eliminate_nullary_full(const Grammar& g) {
  const Semiring& s = g.semiring();
  NullaryAnalysis a = analyze_nullary(g);
  auto index = [&](const Symbol& sym) {
    auto it =
        std::lower_bound(a.nulls.symbols.begin(), a.nulls.symbols.end(), sym);
    return static_cast<std::size_t>(it - a.nulls.symbols.begin());
  };

  std::vector<Rule> rules;
  for (const Rule& rule : g.rules()) {
    if (rule.is_nullary()) continue;
    // Classify the right-hand positions.
    std::vector<std::size_t> optional;  // droppable, but can stay
    std::vector<bool> always_drop(rule.rhs.size(), false);
    Weight folded = rule.weight;
    for (std::size_t t = 0; t < rule.rhs.size(); ++t) {
      const Symbol& sym = rule.rhs[t];
      if (sym.is_terminal()) continue;
      std::size_t i = index(sym);
      if (!a.nullable[i]) continue;
      if (a.derives_nonempty[i]) {
        optional.push_back(t);
      } else {
        always_drop[t] = true;
        folded = s.mul(folded, a.nulls.weights[i]);
      }
    }
    const std::size_t k = optional.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      std::vector<bool> drop(always_drop);
      Weight w = folded;
      for (std::size_t b = 0; b < k; ++b) {
        if (mask & (std::size_t{1} << b)) {
          drop[optional[b]] = true;
          w = s.mul(w, a.nulls.weights[index(rule.rhs[optional[b]])]);
        }
      }
      std::vector<Symbol> rhs;
      for (std::size_t t = 0; t < rule.rhs.size(); ++t) {
        if (!drop[t]) rhs.push_back(rule.rhs[t]);
      }
      if (rhs.empty()) continue;  // became fully nullary
      rules.push_back(Rule{rule.lhs, std::move(rhs), w});
    }
  }
  Weight empty_weight = a.nulls.at(g.start(), s);
  Grammar out(s, g.start(), std::move(rules), g.nonterminals(), g.terminals());
  return NullaryElimination{std::move(out), empty_weight};
}

Grammar eliminate_nullary(const Grammar& g) {
  return eliminate_nullary_full(g).grammar;
}

Grammar eliminate_unary_cycles(const Grammar& g, Execution exec) {
  if (!g.has_nonterminal_unary_rule()) return g;
  const Semiring& s = g.semiring();
  const auto& nts = g.nonterminals();
  auto index = [&](const Symbol& sym) {
    auto it = std::lower_bound(nts.begin(), nts.end(), sym);
    return static_cast<std::size_t>(it - nts.begin());
  };

  WeightMatrix u(nts.size(), s);
  for (const Rule& rule : g.rules()) {
    if (!rule.is_nonterminal_unary()) continue;
    Weight& cell = u.at(index(rule.lhs), index(rule.rhs[0]));
    cell = s.add(cell, rule.weight);
  }
  WeightMatrix closure = star_closure(u, s, exec);
  for (std::size_t i = 0; i < nts.size(); ++i) {
    for (std::size_t j = 0; j < nts.size(); ++j) {
      if (!std::isfinite(closure.at(i, j))) {
        raise(Errc::star_divergence,
              "unary closure diverges at " + symbol_to_string(nts[i]) +
                  " -> " + symbol_to_string(nts[j]));
      }
    }
  }

  std::vector<Rule> rules;
  for (const Rule& rule : g.rules()) {
    if (rule.is_nonterminal_unary()) continue;
    std::size_t y = index(rule.lhs);
    for (std::size_t x = 0; x < nts.size(); ++x) {
      Weight w = closure.at(x, y);
      if (w == s.zero()) continue;
      rules.push_back(Rule{nts[x], rule.rhs, s.mul(w, rule.weight)});
    }
  }
  return Grammar(s, g.start(), std::move(rules), nts, g.terminals());
}

Grammar binarize(const Grammar& g) {
  const Semiring& s = g.semiring();
  std::vector<Rule> rules;
  std::set<std::string> chain_done;

  auto chain_symbol = [&](const std::vector<Symbol>& suffix) {
    std::string name = "<";
    for (std::size_t i = 0; i < suffix.size(); ++i) {
      if (i) name += '.';
      name += symbol_to_string(suffix[i]);
    }
    name += '>';
    return Symbol::nonterminal(name);
  };

  for (const Rule& rule : g.rules()) {
    if (rule.rhs.size() <= 2) {
      rules.push_back(rule);
      continue;
    }
    std::vector<Symbol> suffix(rule.rhs.begin() + 1, rule.rhs.end());
    Symbol head = chain_symbol(suffix);
    rules.push_back(Rule{rule.lhs, {rule.rhs[0], head}, rule.weight});
    while (suffix.size() > 2) {
      Symbol cur = chain_symbol(suffix);
      std::vector<Symbol> rest(suffix.begin() + 1, suffix.end());
      Symbol next = chain_symbol(rest);
      if (chain_done.insert(cur.name()).second) {
        rules.push_back(Rule{cur, {suffix[0], next}, s.one()});
      }
      suffix = std::move(rest);
    }
    Symbol last = chain_symbol(suffix);
    if (chain_done.insert(last.name()).second) {
      rules.push_back(Rule{last, {suffix[0], suffix[1]}, s.one()});
    }
  }
  return Grammar(s, g.start(), std::move(rules), g.nonterminals(),
                 g.terminals());
}

}  // namespace wcfg
