#ifndef WCFG_INSIDE_HPP
#define WCFG_INSIDE_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wcfg/derivation.hpp"
#include "wcfg/grammar.hpp"
#include "wcfg/matrix.hpp"

namespace wcfg {

// Inside-weight computation over spans.
//
// The engine accepts any grammar with finitely many derivations per yield.
// That property is decided structurally: a symbol is nullable if it derives
// the empty string, and a "unit step" is a rule application that passes a
// whole span to a single nonterminal child while every other child derives
// the empty string.  Derivations per yield are finite iff the unit-step
// graph is acyclic; a cycle means some derivation can be pumped without
// changing its yield, and construction raises UnboundedDerivations.  For
// nullary-free grammars this degenerates to the usual condition that the
// nonterminal unary rules form no cycle.
class InsideEngine {
 public:
  explicit InsideEngine(const Grammar& g);

  const Grammar& grammar() const { return *g_; }

  // Total weight of all root-labeled derivations with the given yield.
  Weight string_weight(const Symbol& root, std::span<const Symbol> x) const;

  // Weight of the empty string for each symbol (0 for terminals).
  Weight null_weight(const Symbol& s) const;

 private:
  struct Chart;
  void fill_chart(std::span<const Symbol> x, Chart& chart) const;
  int sym_id(const Symbol& s) const;

  const Grammar* g_;
  std::vector<Symbol> symbols_;        // sorted dense index
  std::vector<Weight> null_;           // per symbol id
  std::vector<bool> nullable_;         // per symbol id
  std::vector<int> unit_topo_;         // nonterminal ids, dependencies first
  std::vector<std::vector<std::pair<int, Weight>>> unit_in_;  // X <- (Y, w)
  std::vector<std::vector<std::size_t>> rules_by_lhs_;
};

Weight string_weight(const Grammar& g, const Symbol& root,
                     std::span<const Symbol> x);

// Independent route: enumerates every derivation with the exact yield and
// sums tree weights.  Used as the oracle against the chart.
Weight string_weight_by_enumeration(const Grammar& g, const Symbol& root,
                                    std::span<const Symbol> x);

// All derivations rooted at `root` whose yield is exactly `x` (finite under
// the engine's boundedness condition; includes empty-yield derivations when
// x is empty).
std::vector<DerivPtr> derivations_with_yield(const Grammar& g,
                                             const Symbol& root,
                                             std::span<const Symbol> x);

// Weights of every string of length <= max_len over `alphabet`, for each
// requested root.  Strings are ordered by length, then lexicographically in
// alphabet order; the computation over one length layer is data-parallel.
struct LanguageTable {
  std::vector<Symbol> alphabet;
  std::vector<std::vector<Symbol>> strings;
  std::vector<Symbol> roots;
  std::vector<std::vector<Weight>> weights;  // [root][string]

  Weight at(std::size_t root_idx, std::size_t string_idx) const {
    return weights[root_idx][string_idx];
  }
};

LanguageTable language_table(const Grammar& g, std::vector<Symbol> roots,
                             std::vector<Symbol> alphabet, int max_len,
                             Execution exec = Execution::parallel);

struct EquivalenceReport {
  bool equivalent = true;
  std::size_t strings_checked = 0;
  std::string mismatch;  // first differing string, space-joined
  Weight lhs = 0, rhs = 0;

  std::string to_string() const;
};

// Compares the weighted languages of the two grammars' start symbols on all
// strings of length <= max_len over the union alphabet.  Reports the first
// mismatch in (length, lex) order.  Both grammars must be bounded in the
// engine's sense and share the same semiring.
EquivalenceReport equivalence_check(const Grammar& a, const Grammar& b,
                                    int max_len, bool include_empty = true,
                                    Execution exec = Execution::parallel);

}  // namespace wcfg

#endif  // WCFG_INSIDE_HPP
