#include "wcfg/ingest.hpp"

#include <algorithm>
#include <map>

#include "wcfg/errors.hpp"

namespace wcfg {

Treebank parse_treebank(const std::string& text) {
  return Treebank{parse_sexp_stream(text)};
}

Treebank read_treebank(const std::string& path) {
  return parse_treebank(slurp_file(path));
}

namespace {

std::string strip_label(const std::string& label,
                        const std::optional<std::string>& delimiter) {
  std::size_t cut = std::string::npos;
  if (delimiter) {
    cut = label.find(*delimiter);
  } else {
    for (const char* d : {"-", "=", "##"}) {
      std::size_t p = label.find(d);
      if (p != std::string::npos) cut = std::min(cut, p);
    }
  }
  if (cut == std::string::npos || cut == 0) return label;
  return label.substr(0, cut);
}

void strip_tree(LabeledTree& t, const std::optional<std::string>& delimiter) {
  if (t.leaf) return;
  t.label = strip_label(t.label, delimiter);
  for (LabeledTree& c : t.children) strip_tree(c, delimiter);
}

// Splice out every nonterminal node with exactly one nonterminal child, so
// chains like X -> Y -> Z -> rhs become X -> rhs.
void collapse_unary_chains(LabeledTree& t) {
  if (t.leaf) return;
  while (t.children.size() == 1 && !t.children[0].leaf) {
    std::vector<LabeledTree> grandchildren =
        std::move(t.children[0].children);
    t.children = std::move(grandchildren);
  }
  for (LabeledTree& c : t.children) collapse_unary_chains(c);
}

bool has_childless_internal(const LabeledTree& t) {
  if (t.leaf) return false;
  if (t.children.empty()) return true;
  for (const LabeledTree& c : t.children) {
    if (has_childless_internal(c)) return true;
  }
  return false;
}

struct RuleShape {
  Symbol lhs;
  std::vector<Symbol> rhs;
  bool operator<(const RuleShape& o) const {
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

void count_rules(const LabeledTree& t, std::map<RuleShape, std::size_t>& counts) {
  if (t.leaf) return;
  RuleShape shape;
  shape.lhs = Symbol::nonterminal(t.label);
  for (const LabeledTree& c : t.children) {
    shape.rhs.push_back(c.leaf ? Symbol::terminal(c.label)
                               : Symbol::nonterminal(c.label));
  }
  ++counts[shape];
  for (const LabeledTree& c : t.children) count_rules(c, counts);
}

}  // namespace

ExtractResult extract_grammar_full(const Treebank& tb,
                                   const ExtractOptions& options) {
  if (tb.trees.empty()) {
    raise(Errc::invalid_params, "cannot extract a grammar from an empty treebank");
  }

  std::vector<LabeledTree> trees = tb.trees;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (trees[i].leaf) {
      raise(Errc::invalid_params,
            "tree " + std::to_string(i) + " is a bare terminal");
    }
    if (options.strip_annotations) strip_tree(trees[i], options.delimiter);
    collapse_unary_chains(trees[i]);
  }

  std::vector<std::size_t> offending;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (has_childless_internal(trees[i])) offending.push_back(i);
  }
  if (!offending.empty()) {
    std::string which;
    for (std::size_t i : offending) {
      if (!which.empty()) which += ", ";
      which += std::to_string(i);
    }
    raise(Errc::nullary_in_treebank,
          "childless internal nodes in trees " + which);
  }

  std::map<RuleShape, std::size_t> counts;
  std::map<Symbol, std::size_t> lhs_totals;
  std::map<std::string, std::size_t> roots;
  for (const LabeledTree& t : trees) {
    count_rules(t, counts);
    ++roots[t.label];
  }
  for (const auto& [shape, n] : counts) lhs_totals[shape.lhs] += n;

  ExtractResult result{
      Grammar(Semiring::real(), Symbol::nonterminal("?"), {}), {}, false};
  result.root_counts.assign(roots.begin(), roots.end());
  std::stable_sort(result.root_counts.begin(), result.root_counts.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  if (result.root_counts.size() > 1 &&
      result.root_counts[0].second == result.root_counts[1].second) {
    result.start_tie_broken = true;
  }
  Symbol start = Symbol::nonterminal(result.root_counts[0].first);

  std::vector<Rule> rules;
  rules.reserve(counts.size());
  for (const auto& [shape, n] : counts) {
    Weight w = static_cast<Weight>(n) / static_cast<Weight>(lhs_totals[shape.lhs]);
    rules.push_back(Rule{shape.lhs, shape.rhs, w});
  }
  result.grammar = Grammar(Semiring::real(), start, std::move(rules));
  return result;
}

Grammar extract_grammar(const Treebank& tb, const ExtractOptions& options) {
  return extract_grammar_full(tb, options).grammar;
}

}  // namespace wcfg
