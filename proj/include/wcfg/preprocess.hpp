#ifndef WCFG_PREPROCESS_HPP
#define WCFG_PREPROCESS_HPP

#include <cstddef>
#include <vector>

#include "wcfg/grammar.hpp"
#include "wcfg/matrix.hpp"

namespace wcfg {

// Null weights: the total weight of empty-yield derivations per nonterminal.
struct NullWeights {
  std::vector<Symbol> symbols;  // sorted nonterminals
  std::vector<Weight> weights;

  Weight at(const Symbol& s, const Semiring& semiring) const;
};

// Iterates the polynomial system for the empty string from the zero vector
// until successive iterates differ by at most `tol` per symbol (the smallest
// solution under the natural order).  Raises NoConvergence after max_iters.
NullWeights null_weights_fixed_point(const Grammar& g, int max_iters = 10000,
                                     double tol = 1e-12);

// Fast path for left-corner outputs of nullary-free grammars: there the only
// nullary rules are the slashed bases X/X -> empty and the system is linear
// in the slashed symbols, so one algebraic-path closure solves it exactly.
// Raises NotGLCTShape when a nullary rule with a non-slashed left-hand side
// exists.
NullWeights null_weights_glct(const Grammar& g,
                              Execution exec = Execution::parallel);

// Removes nullary rules.  Positions whose symbol can derive the empty
// string become optional and each rule is emitted once per choice of
// dropped optional positions, weighted by the null weights of what was
// dropped; positions whose symbol derives nothing but the empty string are
// always folded away.  The weight the start symbol assigns to the empty
// string cannot be represented without a nullary rule, so it is reported
// alongside the grammar instead.
struct NullaryElimination {
  Grammar grammar;
  Weight empty_weight;
};

NullaryElimination eliminate_nullary_full(const Grammar& g);
Grammar eliminate_nullary(const Grammar& g);

// Removes nonterminal-to-nonterminal unary rules by composing their star
// closure into every other rule.  Unary rules with a terminal child are
// untouched.  Raises StarDivergence when the closure leaves the carrier's
// finite range.
Grammar eliminate_unary_cycles(const Grammar& g,
                               Execution exec = Execution::parallel);

// Caps rule arity at 2 by folding long right-hand sides left-to-right
// through fresh chain nonterminals named after the folded suffix; the
// original weight rides on the first rule of the chain.  Shared suffixes
// share their chain rules.
Grammar binarize(const Grammar& g);

}  // namespace wcfg

#endif  // WCFG_PREPROCESS_HPP
