#ifndef WCFG_LEFTREC_HPP
#define WCFG_LEFTREC_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "wcfg/grammar.hpp"
#include "wcfg/transform.hpp"

namespace wcfg {

// The left-recursion graph has one node per grammar symbol and, for every
// non-nullary rule, an edge from the rule's left-hand side to its leftmost
// right-hand symbol.  Cycles characterize (unbounded) left recursion.
struct LeftRecursionGraph {
  struct Edge {
    std::size_t rule;  // index into the grammar's rule bag
    int from, to;      // node ids
  };

  std::vector<Symbol> nodes;  // sorted
  std::vector<Edge> edges;    // rule order
  std::vector<std::vector<std::size_t>> out;  // node id -> edge indices

  int node_id(const Symbol& s) const;
};

LeftRecursionGraph left_recursion_graph(const Grammar& g);

// Strongly connected components; ids are assigned in reverse topological
// order (sinks first) and deterministically.
struct SccResult {
  std::vector<int> component;  // per node id
  int count = 0;
};

SccResult sccs(const LeftRecursionGraph& graph);

// Rules whose left-recursion edge stays inside one strongly connected
// component.  Sorted rule indices.
std::vector<std::size_t> left_recursive_rules(const Grammar& g);

// The symbols that can appear at the bottom of a spine for the given
// recognition rule set: terminals and symbols with a non-recognition rule,
// intersected with the corner slots of the recognition rules.
std::vector<Symbol> bottoms(const Grammar& g,
                            const std::vector<std::size_t>& rule_indices);

// Left-recursion depth of the grammar: the longest path from the start
// symbol in the trimmed left-recursion graph, or nullopt when a cycle is
// reachable (the grammar is left-recursive).
std::optional<std::size_t> lr_depth(const Grammar& g);

// The elimination recipe: take P as the left-recursive rules and X as
// bottoms(P), apply the left-corner transformation, and trim.  The output
// graph is acyclic with lr-depth at most twice the input's component count.
// Requires a grammar with no nullary rules and no nonterminal-unary rules.
struct EliminationResult {
  Grammar grammar;
  TransformParams params;
};

EliminationResult eliminate_left_recursion(const Grammar& g);

}  // namespace wcfg

#endif  // WCFG_LEFTREC_HPP
