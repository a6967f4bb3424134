#include "wcfg/grammar.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "wcfg/errors.hpp"

namespace wcfg {

int Rule::compare(const Rule& a, const Rule& b) {
  int c = Symbol::compare(a.lhs, b.lhs);
  if (c != 0) return c;
  std::size_t n = std::min(a.rhs.size(), b.rhs.size());
  for (std::size_t i = 0; i < n; ++i) {
    c = Symbol::compare(a.rhs[i], b.rhs[i]);
    if (c != 0) return c;
  }
  if (a.rhs.size() != b.rhs.size()) return a.rhs.size() < b.rhs.size() ? -1 : 1;
  if (a.weight != b.weight) return a.weight < b.weight ? -1 : 1;
  return 0;
}

Grammar::Grammar(Semiring semiring, Symbol start, std::vector<Rule> rules,
                 std::vector<Symbol> extra_nonterminals,
                 std::vector<Symbol> extra_terminals)
    : semiring_(std::move(semiring)),
      start_(std::move(start)),
      rules_(std::move(rules)) {
  if (!start_.is_nonterminal()) {
    raise(Errc::invalid_params, "start symbol must be a nonterminal");
  }
  std::set<Symbol> nts, ts;
  nts.insert(start_);
  auto add = [&](const Symbol& s) {
    if (s.is_terminal()) {
      ts.insert(s);
    } else {
      nts.insert(s);
    }
  };
  for (const Rule& r : rules_) {
    if (!r.lhs.is_nonterminal()) {
      raise(Errc::invalid_params, "rule left-hand side must be a nonterminal");
    }
    add(r.lhs);
    for (const Symbol& s : r.rhs) add(s);
  }
  for (const Symbol& s : extra_nonterminals) {
    if (!s.is_nonterminal()) {
      raise(Errc::invalid_params, "terminal listed among nonterminals");
    }
    nts.insert(s);
  }
  for (const Symbol& s : extra_terminals) {
    if (!s.is_terminal()) {
      raise(Errc::invalid_params, "nonterminal listed among terminals");
    }
    ts.insert(s);
  }
  nonterminals_.assign(nts.begin(), nts.end());
  terminals_.assign(ts.begin(), ts.end());
}

bool Grammar::has_nonterminal(const Symbol& s) const {
  return std::binary_search(nonterminals_.begin(), nonterminals_.end(), s);
}

bool Grammar::has_terminal(const Symbol& s) const {
  return std::binary_search(terminals_.begin(), terminals_.end(), s);
}

bool Grammar::has_nullary_rule() const {
  return std::any_of(rules_.begin(), rules_.end(),
                     [](const Rule& r) { return r.is_nullary(); });
}

bool Grammar::has_nonterminal_unary_rule() const {
  return std::any_of(rules_.begin(), rules_.end(),
                     [](const Rule& r) { return r.is_nonterminal_unary(); });
}

std::size_t grammar_size(const Grammar& g) {
  std::size_t total = 0;
  for (const Rule& r : g.rules()) total += 1 + r.rhs.size();
  return total;
}

std::size_t rule_count(const Grammar& g) { return g.rule_count(); }

Grammar trim(const Grammar& g) {
  const auto& rules = g.rules();

  // Productive symbols: worklist on the count of not-yet-productive rhs
  // occurrences per rule.
  std::unordered_set<Symbol, SymbolHash> productive;
  std::unordered_map<Symbol, std::vector<std::size_t>, SymbolHash> occurs;
  std::vector<std::size_t> missing(rules.size());
  std::queue<std::size_t> ready;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    std::size_t need = 0;
    for (const Symbol& s : rules[i].rhs) {
      if (!s.is_terminal()) {
        ++need;
        occurs[s].push_back(i);
      }
    }
    missing[i] = need;
    if (need == 0) ready.push(i);
  }
  std::vector<bool> viable(rules.size(), false);
  while (!ready.empty()) {
    std::size_t i = ready.front();
    ready.pop();
    viable[i] = true;
    const Symbol& lhs = rules[i].lhs;
    if (productive.insert(lhs).second) {
      for (std::size_t j : occurs[lhs]) {
        if (--missing[j] == 0) ready.push(j);
      }
    }
  }

  // Reachability from the start symbol through viable rules only.
  std::unordered_map<Symbol, std::vector<std::size_t>, SymbolHash> by_lhs;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (viable[i]) by_lhs[rules[i].lhs].push_back(i);
  }
  std::unordered_set<Symbol, SymbolHash> reached;
  std::queue<Symbol> frontier;
  reached.insert(g.start());
  frontier.push(g.start());
  std::vector<bool> keep(rules.size(), false);
  while (!frontier.empty()) {
    Symbol x = frontier.front();
    frontier.pop();
    auto it = by_lhs.find(x);
    if (it == by_lhs.end()) continue;
    for (std::size_t i : it->second) {
      keep[i] = true;
      for (const Symbol& s : rules[i].rhs) {
        if (!s.is_terminal() && reached.insert(s).second) frontier.push(s);
      }
    }
  }

  std::vector<Rule> kept;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (keep[i]) kept.push_back(rules[i]);
  }
  return Grammar(g.semiring(), g.start(), std::move(kept));
}

namespace {

class TidRenumberer {
 public:
  Symbol rewrite(const Symbol& s) {
    switch (s.kind()) {
      case Symbol::Kind::terminal:
      case Symbol::Kind::nonterminal:
        return s;
      case Symbol::Kind::frozen:
        return Symbol::frozen(rewrite(s.base()), map(s.transform_id()));
      case Symbol::Kind::slashed:
        return Symbol::slashed(rewrite(s.numerator()),
                               rewrite(s.denominator()),
                               map(s.transform_id()));
    }
    return s;
  }

 private:
  TransformId map(TransformId old) {
    auto [it, fresh] = ids_.emplace(old, next_);
    if (fresh) ++next_;
    return it->second;
  }
  std::map<TransformId, TransformId> ids_;
  TransformId next_ = 1;
};

}  // namespace

Grammar canonicalized(const Grammar& g) {
  TidRenumberer ren;
  Symbol start = ren.rewrite(g.start());
  std::vector<Rule> rules;
  rules.reserve(g.rule_count());
  for (const Rule& r : g.rules()) {
    Rule out;
    out.lhs = ren.rewrite(r.lhs);
    out.rhs.reserve(r.rhs.size());
    for (const Symbol& s : r.rhs) out.rhs.push_back(ren.rewrite(s));
    out.weight = r.weight;
    rules.push_back(std::move(out));
  }
  std::stable_sort(rules.begin(), rules.end());
  return Grammar(g.semiring(), std::move(start), std::move(rules));
}

bool grammars_equal(const Grammar& a, const Grammar& b) {
  if (!(a.semiring() == b.semiring())) return false;
  Grammar ca = canonicalized(trim(a));
  Grammar cb = canonicalized(trim(b));
  return ca.start() == cb.start() && ca.rules() == cb.rules() &&
         ca.nonterminals() == cb.nonterminals() &&
         ca.terminals() == cb.terminals();
}

}  // namespace wcfg
