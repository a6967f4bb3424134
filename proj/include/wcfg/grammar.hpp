#ifndef WCFG_GRAMMAR_HPP
#define WCFG_GRAMMAR_HPP

#include <cstddef>
#include <vector>

#include "wcfg/semiring.hpp"
#include "wcfg/symbol.hpp"

namespace wcfg {

struct Rule {
  Symbol lhs;
  std::vector<Symbol> rhs;
  Weight weight = 1.0;

  std::size_t arity() const { return rhs.size(); }
  bool is_nullary() const { return rhs.empty(); }
  bool is_unary() const { return rhs.size() == 1; }
  // Unary with a nonterminal on the right; these are the rules that unary
  // cycle elimination removes and that the left-recursion recipe rejects.
  bool is_nonterminal_unary() const {
    return rhs.size() == 1 && rhs[0].is_nonterminal();
  }

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.weight == b.weight && a.lhs == b.lhs && a.rhs == b.rhs;
  }
  static int compare(const Rule& a, const Rule& b);
  friend bool operator<(const Rule& a, const Rule& b) {
    return compare(a, b) < 0;
  }
};

// A weighted context-free grammar: sorted symbol inventories, a start
// symbol, an ordered bag of weighted rules, and the semiring the weights
// live in.  Rule order is significant: rules are addressed by index (e.g.
// transform parameter sets), and duplicate rules are kept as distinct bag
// entries.  Immutable after construction.
class Grammar {
 public:
  Grammar(Semiring semiring, Symbol start, std::vector<Rule> rules,
          std::vector<Symbol> extra_nonterminals = {},
          std::vector<Symbol> extra_terminals = {});

  const Semiring& semiring() const { return semiring_; }
  const Symbol& start() const { return start_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const Rule& rule(std::size_t i) const { return rules_[i]; }
  std::size_t rule_count() const { return rules_.size(); }

  const std::vector<Symbol>& nonterminals() const { return nonterminals_; }
  const std::vector<Symbol>& terminals() const { return terminals_; }
  bool has_nonterminal(const Symbol& s) const;
  bool has_terminal(const Symbol& s) const;
  bool has_symbol(const Symbol& s) const {
    return has_nonterminal(s) || has_terminal(s);
  }

  bool has_nullary_rule() const;
  bool has_nonterminal_unary_rule() const;

 private:
  Semiring semiring_;
  Symbol start_;
  std::vector<Rule> rules_;
  std::vector<Symbol> nonterminals_;  // sorted
  std::vector<Symbol> terminals_;     // sorted
};

// size(G) = sum over rules of (1 + |rhs|).
std::size_t grammar_size(const Grammar& g);
std::size_t rule_count(const Grammar& g);

// Restricts the grammar to symbols that are reachable from the start symbol
// and productive, dropping every rule that mentions a useless symbol.  The
// start symbol is kept even when nothing remains.  Trimming is structural:
// rule weights play no part.
Grammar trim(const Grammar& g);

// Deterministic normal form used by the golden tests and grammar equality:
// transform ids renumbered by first occurrence, rules sorted, inventories
// recomputed from the rules (plus the start symbol).
Grammar canonicalized(const Grammar& g);

// Tuple equality after trimming and canonical ordering.
bool grammars_equal(const Grammar& a, const Grammar& b);

}  // namespace wcfg

#endif  // WCFG_GRAMMAR_HPP
