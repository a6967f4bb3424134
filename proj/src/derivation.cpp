#include "wcfg/derivation.hpp"

#include <map>
#include <unordered_map>

#include "wcfg/errors.hpp"

namespace wcfg {

DerivPtr Derivation::leaf(Symbol terminal) {
  auto t = std::shared_ptr<Derivation>(new Derivation());
  t->leaf_ = true;
  t->label_ = std::move(terminal);
  t->height_ = 1;
  return t;
}

DerivPtr Derivation::node(Rule rule, int rule_index,
                          std::vector<DerivPtr> children) {
  auto t = std::shared_ptr<Derivation>(new Derivation());
  t->leaf_ = false;
  t->label_ = rule.lhs;
  t->rule_ = std::move(rule);
  t->rule_index_ = rule_index;
  t->children_ = std::move(children);
  int h = 0;
  for (const DerivPtr& c : t->children_) h = std::max(h, c->height());
  t->height_ = h + 1;
  return t;
}

namespace {

bool same_impl(const DerivPtr& a, const DerivPtr& b, bool with_index) {
  if (a == b) return true;
  if (a->is_leaf() != b->is_leaf()) return false;
  if (a->label() != b->label()) return false;
  if (a->is_leaf()) return true;
  if (with_index && a->rule_index() != b->rule_index()) return false;
  if (!(a->rule() == b->rule())) return false;
  if (a->children().size() != b->children().size()) return false;
  for (std::size_t i = 0; i < a->children().size(); ++i) {
    if (!same_impl(a->children()[i], b->children()[i], with_index)) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool same_derivation(const DerivPtr& a, const DerivPtr& b) {
  return same_impl(a, b, true);
}

bool same_derivation_modulo_index(const DerivPtr& a, const DerivPtr& b) {
  return same_impl(a, b, false);
}

static void yield_into(const DerivPtr& t, std::vector<Symbol>& out) {
  if (t->is_leaf()) {
    out.push_back(t->label());
    return;
  }
  for (const DerivPtr& c : t->children()) yield_into(c, out);
}

std::vector<Symbol> yield(const DerivPtr& t) {
  std::vector<Symbol> out;
  yield_into(t, out);
  return out;
}

std::string yield_string(const DerivPtr& t) {
  std::string out;
  for (const Symbol& s : yield(t)) {
    if (!out.empty()) out += ' ';
    out += s.name();
  }
  return out;
}

Weight weight(const DerivPtr& t, const Semiring& semiring) {
  if (t->is_leaf()) return semiring.one();
  Weight w = t->rule().weight;
  for (const DerivPtr& c : t->children()) w = semiring.mul(w, weight(c, semiring));
  return w;
}

namespace {

class Enumerator {
 public:
  explicit Enumerator(const Grammar& g) : g_(g) {
    for (std::size_t i = 0; i < g.rule_count(); ++i) {
      by_lhs_[g.rule(i).lhs].push_back(i);
    }
  }

  const std::vector<DerivPtr>& trees(const Symbol& sym, int budget) {
    auto key = std::make_pair(sym, budget);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    std::vector<DerivPtr> out;
    if (budget >= 1) {
      if (sym.is_terminal()) {
        out.push_back(Derivation::leaf(sym));
      } else {
        auto rules_it = by_lhs_.find(sym);
        if (rules_it != by_lhs_.end()) {
          for (std::size_t idx : rules_it->second) {
            expand(idx, budget, out);
          }
        }
      }
    }
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

 private:
  void expand(std::size_t rule_index, int budget, std::vector<DerivPtr>& out) {
    const Rule& rule = g_.rule(rule_index);
    const std::size_t k = rule.rhs.size();
    if (k == 0) {
      out.push_back(Derivation::node(rule, static_cast<int>(rule_index), {}));
      return;
    }
    std::vector<const std::vector<DerivPtr>*> pools(k);
    for (std::size_t j = 0; j < k; ++j) {
      pools[j] = &trees(rule.rhs[j], budget - 1);
      if (pools[j]->empty()) return;
    }
    // Odometer over child choices; the leftmost child varies slowest.
    std::vector<std::size_t> pick(k, 0);
    while (true) {
      std::vector<DerivPtr> kids(k);
      for (std::size_t j = 0; j < k; ++j) kids[j] = (*pools[j])[pick[j]];
      out.push_back(
          Derivation::node(rule, static_cast<int>(rule_index), std::move(kids)));
      std::size_t j = k;
      while (j > 0) {
        --j;
        if (++pick[j] < pools[j]->size()) break;
        pick[j] = 0;
        if (j == 0) return;
      }
    }
  }

  struct KeyLess {
    bool operator()(const std::pair<Symbol, int>& a,
                    const std::pair<Symbol, int>& b) const {
      if (a.second != b.second) return a.second < b.second;
      return a.first < b.first;
    }
  };

  const Grammar& g_;
  std::unordered_map<Symbol, std::vector<std::size_t>, SymbolHash> by_lhs_;
  std::map<std::pair<Symbol, int>, std::vector<DerivPtr>, KeyLess> memo_;
};

}  // namespace

std::vector<DerivPtr> enumerate_derivations(const Grammar& g,
                                            const Symbol& root,
                                            int max_height) {
  if (max_height < 1) {
    raise(Errc::invalid_params, "max_height must be at least 1");
  }
  Enumerator e(g);
  return e.trees(root, max_height);
}

bool derivation_in_grammar(const Grammar& g, const DerivPtr& t) {
  if (t->is_leaf()) return g.has_terminal(t->label());
  int idx = t->rule_index();
  if (idx < 0 || static_cast<std::size_t>(idx) >= g.rule_count()) return false;
  if (!(g.rule(idx) == t->rule())) return false;
  const Rule& r = t->rule();
  if (r.rhs.size() != t->children().size()) return false;
  for (std::size_t j = 0; j < r.rhs.size(); ++j) {
    if (t->children()[j]->label() != r.rhs[j]) return false;
    if (!derivation_in_grammar(g, t->children()[j])) return false;
  }
  return true;
}

LabeledTree to_labeled_tree(const DerivPtr& t, bool with_ids) {
  LabeledTree out;
  if (t->is_leaf()) {
    out.leaf = true;
    out.label = t->label().name();
    return out;
  }
  out.label = symbol_to_string(t->label(), with_ids);
  out.children.reserve(t->children().size());
  for (const DerivPtr& c : t->children()) {
    out.children.push_back(to_labeled_tree(c, with_ids));
  }
  return out;
}

namespace {

class TreeBinder {
 public:
  TreeBinder(const Grammar& g, SymbolTextContext& ctx) : g_(g), ctx_(ctx) {
    for (std::size_t i = 0; i < g.rule_count(); ++i) {
      RuleKey key{g.rule(i).lhs, g.rule(i).rhs};
      index_.emplace(std::move(key), i);  // first (lowest) index wins
    }
  }

  DerivPtr bind(const LabeledTree& t) {
    if (t.leaf) {
      Symbol term = Symbol::terminal(t.label);
      if (!g_.has_terminal(term)) {
        raise(Errc::foreign_rule,
              "terminal '" + t.label + "' is not in the grammar");
      }
      return Derivation::leaf(term);
    }
    Symbol lhs = parse_symbol(t.label, ctx_);
    std::vector<DerivPtr> kids;
    kids.reserve(t.children.size());
    std::vector<Symbol> rhs;
    rhs.reserve(t.children.size());
    for (const LabeledTree& c : t.children) {
      kids.push_back(bind(c));
      rhs.push_back(kids.back()->label());
    }
    auto it = index_.find(RuleKey{lhs, rhs});
    if (it == index_.end()) {
      raise(Errc::foreign_rule, "no rule " + symbol_to_string(lhs) +
                                    " -> ... matches this node");
    }
    return Derivation::node(g_.rule(it->second),
                            static_cast<int>(it->second), std::move(kids));
  }

 private:
  struct RuleKey {
    Symbol lhs;
    std::vector<Symbol> rhs;
    bool operator<(const RuleKey& o) const {
      int c = Symbol::compare(lhs, o.lhs);
      if (c != 0) return c < 0;
      std::size_t n = std::min(rhs.size(), o.rhs.size());
      for (std::size_t i = 0; i < n; ++i) {
        c = Symbol::compare(rhs[i], o.rhs[i]);
        if (c != 0) return c < 0;
      }
      return rhs.size() < o.rhs.size();
    }
  };

  const Grammar& g_;
  SymbolTextContext& ctx_;
  std::map<RuleKey, std::size_t> index_;
};

}  // namespace

DerivPtr bind_tree(const Grammar& g, const LabeledTree& t,
                   SymbolTextContext& ctx) {
  return TreeBinder(g, ctx).bind(t);
}

}  // namespace wcfg
