#ifndef WCFG_TRANSFORM_HPP
#define WCFG_TRANSFORM_HPP

#include <cstddef>
#include <vector>

#include "wcfg/grammar.hpp"

namespace wcfg {

// Parameters of the corner transformations: a set P of left-corner
// recognition rules (as indices into the grammar's rule bag; none may be
// nullary) and a set X of left-corner recognition symbols.  Each parameter
// set carries the transform-instance id embedded into the frozen and
// slashed symbols it creates.
class TransformParams {
 public:
  // Validates against g and allocates a fresh transform id.
  static TransformParams make(const Grammar& g,
                              std::vector<std::size_t> rule_indices,
                              std::vector<Symbol> corner_symbols);
  // Same, but with a caller-provided id (e.g. read back from a params file).
  static TransformParams make_with_id(const Grammar& g,
                                      std::vector<std::size_t> rule_indices,
                                      std::vector<Symbol> corner_symbols,
                                      TransformId id);

  const std::vector<std::size_t>& rule_indices() const { return p_; }
  const std::vector<Symbol>& corner_symbols() const { return x_; }
  TransformId id() const { return id_; }

  bool in_p(std::size_t rule_index) const;
  bool in_x(const Symbol& s) const;

  Symbol frozen(const Symbol& s) const { return Symbol::frozen(s, id_); }
  Symbol slashed(const Symbol& num, const Symbol& den) const {
    return Symbol::slashed(num, den, id_);
  }

 private:
  TransformParams() = default;
  std::vector<std::size_t> p_;  // sorted unique
  std::vector<Symbol> x_;      // sorted unique
  TransformId id_ = 0;
};

// Where an output rule came from; `source_rule` indexes the input grammar's
// bag for the weight-carrying families and is -1 for the identity-weight
// recovery/base rules.  The derivation mappings key on this.
enum class RuleOrigin {
  recover_frozen,  // X -> ~X
  recover_slash,   // X -> ~a X/a
  slash_base,      // X/X -> empty
  slash_step,      // GLCT: Y/a -> b... Y/X   speculation: X/Y -> a/Y b...
  frozen_base,     // ~X -> rhs of a non-P rule
  frozen_step,     // ~X -> ~a b...
};

struct RuleProvenance {
  RuleOrigin origin;
  int source_rule = -1;
};

struct TransformedGrammar {
  Grammar grammar;
  std::vector<RuleProvenance> provenance;  // parallel to grammar.rules()
};

// Generalized left-corner transformation.  Emits the six rule families in a
// fixed order (recovery, slash base/step, frozen base/step) with no
// trimming; the output keeps the input's nonterminals, terminals and start
// symbol, and adds the frozen/slashed symbols that occur in emitted rules.
TransformedGrammar glct_with_provenance(const Grammar& g,
                                        const TransformParams& params);
Grammar glct(const Grammar& g, const TransformParams& params);

// GLCT with the useless-rule filters: recovery and slash rules are emitted
// only for retained nonterminals and only where the corner is reachable in
// the P-restricted left-recursion graph.  Filtered output is a subset of
// the unfiltered rules and trims to the same grammar.
TransformedGrammar glct_filtered_with_provenance(const Grammar& g,
                                                 const TransformParams& params);
Grammar glct_filtered(const Grammar& g, const TransformParams& params);

// Speculation: identical to GLCT except for the slash-step family, which
// keeps the slashed nonterminal on the left of the emitted right-hand side
// (left recursion is preserved, not turned into right recursion) and lets
// the denominator range over terminals as well.
TransformedGrammar speculate_with_provenance(const Grammar& g,
                                             const TransformParams& params);
Grammar speculate(const Grammar& g, const TransformParams& params);

// Special cases: the basic left-corner transformation takes every rule and
// every symbol; the selective one takes a rule subset with all symbols.
TransformParams lct_params(const Grammar& g);
TransformParams slct_params(const Grammar& g,
                            std::vector<std::size_t> rule_indices);
Grammar lct(const Grammar& g);
Grammar slct(const Grammar& g, std::vector<std::size_t> rule_indices);

// Upper bound on the raw output rule count:
// |R| + |N| (1 + |X| + |P|) + |N \ X| + |V|.
std::size_t rule_count_bound(const Grammar& g, const TransformParams& params);

}  // namespace wcfg

#endif  // WCFG_TRANSFORM_HPP
