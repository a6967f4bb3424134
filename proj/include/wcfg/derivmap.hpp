#ifndef WCFG_DERIVMAP_HPP
#define WCFG_DERIVMAP_HPP

#include <map>
#include <vector>

#include "wcfg/derivation.hpp"
#include "wcfg/transform.hpp"

namespace wcfg {

// Spine of a derivation: the maximal chain of recognition rules along its
// left edges.  `nodes` runs top to bottom; each node except the last is
// expanded by a rule in P whose leftmost child is the next node.  The last
// node is a terminal leaf or a node expanded by a non-recognition rule; its
// children (if any) sit below the spine.
struct SpineDecomposition {
  std::vector<DerivPtr> nodes;  // top to bottom; never empty

  std::size_t length() const { return nodes.size(); }
  // Symbols bottom-to-top (X_1 .. X_K in the usual indexing).
  std::vector<Symbol> symbols_bottom_up() const;
};

SpineDecomposition spine(const DerivPtr& t, const TransformParams& params);

// The left corner: the bottommost spine subtree labeled with a recognition
// symbol.  `spine_index` is 1-based from the bottom of the spine; a missing
// corner leaves `corner` null.
struct LeftCornerResult {
  DerivPtr corner;
  std::size_t spine_index = 0;

  bool absent() const { return corner == nullptr; }
};

LeftCornerResult left_corner(const DerivPtr& t, const TransformParams& params);

// The structure-preserving bijection between derivations of g and of
// glct(g, params): `forward` hoists each left corner and freezes cornerless
// spines; `inverse` undoes it exactly (including rule indices for trees
// built over the raw output).  Both directions preserve root label, yield,
// and weight.
//
// Inputs are validated: a rule that is not part of the expected grammar
// raises ForeignRule, and an output tree that does not match a recovery
// pattern at a nonterminal root raises MalformedShape.  Trees over a
// trimmed copy of the output are accepted; rules are matched by content.
class DerivationMapper {
 public:
  DerivationMapper(const Grammar& g, const TransformParams& params);

  const Grammar& source() const { return source_; }
  const Grammar& output() const { return output_.grammar; }
  const TransformParams& params() const { return params_; }

  DerivPtr forward(const DerivPtr& t) const;
  DerivPtr inverse(const DerivPtr& t) const;
  // The mapping applied pointwise to a sequence of sibling subtrees.
  std::vector<DerivPtr> forward_sequence(const std::vector<DerivPtr>& ts) const;
  std::vector<DerivPtr> inverse_sequence(const std::vector<DerivPtr>& ts) const;

 private:
  DerivPtr forward_node(const DerivPtr& t) const;
  DerivPtr frozen_subtree(const std::vector<DerivPtr>& spine_nodes,
                          std::size_t upto) const;
  struct Resolved;
  Resolved resolve(const DerivPtr& t) const;
  DerivPtr inverse_node(const DerivPtr& t) const;

  Grammar source_;
  TransformParams params_;
  TransformedGrammar output_;

  // Lookup tables into the output rule bag.
  std::map<Symbol, std::size_t> recover_frozen_;          // X
  std::map<std::pair<Symbol, Symbol>, std::size_t> recover_slash_;  // (X, a)
  std::map<Symbol, std::size_t> slash_base_;              // X of X/X
  std::map<std::pair<int, Symbol>, std::size_t> slash_step_;  // (rule, Y)
  std::map<int, std::size_t> frozen_base_;                // source rule
  std::map<int, std::size_t> frozen_step_;                // source rule
  std::map<std::string, std::size_t> by_content_;         // fallback resolve
};

// The derivation bijection between the speculation output and the GLCT
// output for the same parameters, defined on every root symbol (original,
// frozen, and slashed).  Slashed derivations trade their left-branching
// chain for the right-branching one; everything else maps structurally.
class SpecGlctMapper {
 public:
  SpecGlctMapper(const Grammar& g, const TransformParams& params);

  const Grammar& spec_output() const { return spec_.grammar; }
  const Grammar& glct_output() const { return glct_.grammar; }

  DerivPtr spec_to_glct(const DerivPtr& t) const;
  DerivPtr glct_to_spec(const DerivPtr& t) const;

 private:
  struct Side;
  DerivPtr map_tree(const DerivPtr& t, bool from_spec) const;

  Grammar source_;
  TransformParams params_;
  TransformedGrammar spec_, glct_;

  struct Tables {
    std::map<Symbol, std::size_t> recover_frozen;
    std::map<std::pair<Symbol, Symbol>, std::size_t> recover_slash;
    std::map<Symbol, std::size_t> slash_base;
    std::map<std::pair<int, Symbol>, std::size_t> slash_step;
    std::map<int, std::size_t> frozen_base;
    std::map<int, std::size_t> frozen_step;
    std::map<std::string, std::size_t> by_content;
  };
  Tables spec_tab_, glct_tab_;

  const RuleProvenance& resolve(const TransformedGrammar& side,
                                const Tables& tab, const DerivPtr& t,
                                std::size_t* index) const;
};

}  // namespace wcfg

#endif  // WCFG_DERIVMAP_HPP
