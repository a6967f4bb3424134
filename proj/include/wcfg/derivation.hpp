#ifndef WCFG_DERIVATION_HPP
#define WCFG_DERIVATION_HPP

#include <memory>
#include <string>
#include <vector>

#include "wcfg/grammar.hpp"
#include "wcfg/io.hpp"

namespace wcfg {

class Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

// An ordered derivation tree.  A tree is either a terminal leaf or a node
// whose children spell out the right-hand side of the rule applied at the
// node.  Nodes store the applied rule itself (so weights never need a
// grammar lookup) together with its index in the source grammar's rule bag,
// which keeps duplicate rules distinguishable.  Childless nodes are the
// expansions of nullary rules.
class Derivation {
 public:
  static DerivPtr leaf(Symbol terminal);
  static DerivPtr node(Rule rule, int rule_index,
                       std::vector<DerivPtr> children);

  bool is_leaf() const { return leaf_; }
  const Symbol& label() const { return label_; }
  const Rule& rule() const { return rule_; }       // nodes only
  int rule_index() const { return rule_index_; }   // -1 for leaves
  const std::vector<DerivPtr>& children() const { return children_; }

  // Leaves have height 1; a node is one taller than its tallest child
  // (nullary nodes have height 1).
  int height() const { return height_; }

 private:
  Derivation() = default;

  bool leaf_ = false;
  Symbol label_;
  Rule rule_;
  int rule_index_ = -1;
  std::vector<DerivPtr> children_;
  int height_ = 1;
};

// Structural equality including rule indices (trees over the same grammar).
bool same_derivation(const DerivPtr& a, const DerivPtr& b);
// Ignores rule indices: compares labels, rule shapes/weights, children.
// Appropriate across grammars that share rule content (e.g. trimmed copies).
bool same_derivation_modulo_index(const DerivPtr& a, const DerivPtr& b);

// Left-to-right concatenation of the leaf terminals.
std::vector<Symbol> yield(const DerivPtr& t);
std::string yield_string(const DerivPtr& t);

// Product of all rule weights in the tree (leaves contribute the identity).
Weight weight(const DerivPtr& t, const Semiring& semiring);

// Exactly the derivations rooted at `root` of height <= max_height, in
// deterministic order (rule order, then child combinations left-to-right).
// A terminal root yields its single leaf.
std::vector<DerivPtr> enumerate_derivations(const Grammar& g,
                                            const Symbol& root,
                                            int max_height);

// Checks that every node's rule exists at its recorded index in g.
bool derivation_in_grammar(const Grammar& g, const DerivPtr& t);

// Conversion to/from the s-expression text form.  Binding a labeled tree
// resolves every internal node to a rule of g by left-hand side and child
// labels (lowest index wins among duplicates); unresolvable nodes raise
// ForeignRule.
LabeledTree to_labeled_tree(const DerivPtr& t, bool with_ids = true);
DerivPtr bind_tree(const Grammar& g, const LabeledTree& t,
                   SymbolTextContext& ctx);

}  // namespace wcfg

#endif  // WCFG_DERIVATION_HPP
