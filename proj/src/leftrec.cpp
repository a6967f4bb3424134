#include "wcfg/leftrec.hpp"

#include <algorithm>
#include <set>

#include "wcfg/errors.hpp"
#include "wcfg/io.hpp"

namespace wcfg {

int LeftRecursionGraph::node_id(const Symbol& s) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), s);
  if (it == nodes.end() || !(*it == s)) return -1;
  return static_cast<int>(it - nodes.begin());
}

LeftRecursionGraph left_recursion_graph(const Grammar& g) {
  LeftRecursionGraph graph;
  graph.nodes.reserve(g.terminals().size() + g.nonterminals().size());
  std::merge(g.terminals().begin(), g.terminals().end(),
             g.nonterminals().begin(), g.nonterminals().end(),
             std::back_inserter(graph.nodes));
  graph.out.assign(graph.nodes.size(), {});
  for (std::size_t r = 0; r < g.rule_count(); ++r) {
    const Rule& rule = g.rule(r);
    if (rule.is_nullary()) continue;  // nullary rules cannot be left-recursive
    LeftRecursionGraph::Edge e;
    e.rule = r;
    e.from = graph.node_id(rule.lhs);
    e.to = graph.node_id(rule.rhs[0]);
    graph.out[e.from].push_back(graph.edges.size());
    graph.edges.push_back(e);
  }
  return graph;
}

namespace {

// Iterative Tarjan; components are emitted sinks-first, which is the reverse
// topological order of the condensation.
class TarjanScc {
 public:
  explicit TarjanScc(const LeftRecursionGraph& graph) : g_(graph) {
    const std::size_t n = g_.nodes.size();
    index_.assign(n, -1);
    low_.assign(n, 0);
    on_stack_.assign(n, false);
    component_.assign(n, -1);
    for (std::size_t v = 0; v < n; ++v) {
      if (index_[v] < 0) run(static_cast<int>(v));
    }
  }

  SccResult result() && {
    return SccResult{std::move(component_), count_};
  }

 private:
  struct Frame {
    int v;
    std::size_t next_edge = 0;
  };

  void run(int root) {
    std::vector<Frame> stack{{root}};
    push_node(root);
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& out = g_.out[f.v];
      bool descended = false;
      while (f.next_edge < out.size()) {
        int w = g_.edges[out[f.next_edge]].to;
        ++f.next_edge;
        if (index_[w] < 0) {
          stack.push_back({w});
          push_node(w);
          descended = true;
          break;
        }
        if (on_stack_[w]) low_[f.v] = std::min(low_[f.v], index_[w]);
      }
      if (descended) continue;
      // finished f.v
      if (low_[f.v] == index_[f.v]) {
        int w;
        do {
          w = node_stack_.back();
          node_stack_.pop_back();
          on_stack_[w] = false;
          component_[w] = count_;
        } while (w != f.v);
        ++count_;
      }
      int v = f.v;
      stack.pop_back();
      if (!stack.empty()) {
        low_[stack.back().v] = std::min(low_[stack.back().v], low_[v]);
      }
    }
  }

  void push_node(int v) {
    index_[v] = low_[v] = next_index_++;
    node_stack_.push_back(v);
    on_stack_[v] = true;
  }

  const LeftRecursionGraph& g_;
  std::vector<int> index_, low_, component_;
  std::vector<int> node_stack_;
  std::vector<bool> on_stack_;
  int next_index_ = 0;
  int count_ = 0;
};

}  // namespace

SccResult sccs(const LeftRecursionGraph& graph) {
  return TarjanScc(graph).result();
}

std::vector<std::size_t> left_recursive_rules(const Grammar& g) {
  LeftRecursionGraph graph = left_recursion_graph(g);
  SccResult scc = sccs(graph);
  std::vector<std::size_t> out;
  for (const auto& e : graph.edges) {
    if (scc.component[e.from] == scc.component[e.to]) out.push_back(e.rule);
  }
  return out;
}

std::vector<Symbol> bottoms(const Grammar& g,
                            const std::vector<std::size_t>& rule_indices) {
  std::set<std::size_t> p(rule_indices.begin(), rule_indices.end());
  for (std::size_t r : p) {
    if (r >= g.rule_count()) {
      raise(Errc::invalid_params,
            "rule index " + std::to_string(r) + " out of range");
    }
  }
  // Spines end at a terminal or at a symbol with a non-recognition rule;
  // restrict to symbols that occupy the corner slot of a recognition rule.
  std::set<Symbol> enders(g.terminals().begin(), g.terminals().end());
  for (std::size_t r = 0; r < g.rule_count(); ++r) {
    if (g.rule(r).is_nullary() || p.count(r)) continue;
    enders.insert(g.rule(r).lhs);
  }
  std::set<Symbol> corner_slots;
  for (std::size_t r : p) {
    if (g.rule(r).is_nullary()) {
      raise(Errc::invalid_params, "nullary rule in recognition set");
    }
    corner_slots.insert(g.rule(r).rhs[0]);
  }
  std::vector<Symbol> out;
  std::set_intersection(enders.begin(), enders.end(), corner_slots.begin(),
                        corner_slots.end(), std::back_inserter(out));
  return out;
}

std::optional<std::size_t> lr_depth(const Grammar& g) {
  Grammar trimmed = trim(g);
  LeftRecursionGraph graph = left_recursion_graph(trimmed);
  int start = graph.node_id(trimmed.start());
  if (start < 0) return 0;

  // Restrict to nodes reachable from the start.
  std::vector<bool> reach(graph.nodes.size(), false);
  std::vector<int> stack{start};
  reach[start] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (std::size_t e : graph.out[v]) {
      int w = graph.edges[e].to;
      if (!reach[w]) {
        reach[w] = true;
        stack.push_back(w);
      }
    }
  }

  SccResult scc = sccs(graph);
  std::vector<int> scc_size(scc.count, 0);
  for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
    if (reach[v]) ++scc_size[scc.component[v]];
  }
  for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
    if (!reach[v]) continue;
    if (scc_size[scc.component[v]] > 1) return std::nullopt;
    for (std::size_t e : graph.out[v]) {
      if (graph.edges[e].to == static_cast<int>(v)) return std::nullopt;
    }
  }

  // Acyclic: longest path from the start, in reverse topological order of
  // the SCC ids (each component is a single node here).
  std::vector<int> order;
  for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
    if (reach[v]) order.push_back(static_cast<int>(v));
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return scc.component[a] < scc.component[b];  // sinks first
  });
  std::vector<std::size_t> height(graph.nodes.size(), 0);
  for (int v : order) {
    for (std::size_t e : graph.out[v]) {
      height[v] = std::max(height[v], height[graph.edges[e].to] + 1);
    }
  }
  return height[start];
}

EliminationResult eliminate_left_recursion(const Grammar& g) {
  std::vector<std::size_t> nullary, unary;
  for (std::size_t r = 0; r < g.rule_count(); ++r) {
    if (g.rule(r).is_nullary()) nullary.push_back(r);
    if (g.rule(r).is_nonterminal_unary()) unary.push_back(r);
  }
  auto list = [](const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t r : v) {
      if (!out.empty()) out += ", ";
      out += std::to_string(r);
    }
    return out;
  };
  if (!nullary.empty()) {
    raise(Errc::has_nullary_rules,
          "remove nullary rules first (rules " + list(nullary) + ")");
  }
  if (!unary.empty()) {
    raise(Errc::has_unary_rules,
          "remove nonterminal unary rules first (rules " + list(unary) + ")");
  }
  std::vector<std::size_t> p = left_recursive_rules(g);
  std::vector<Symbol> x = bottoms(g, p);
  TransformParams params = TransformParams::make(g, p, x);
  Grammar out = trim(glct(g, params));
  return EliminationResult{std::move(out), std::move(params)};
}

}  // namespace wcfg
