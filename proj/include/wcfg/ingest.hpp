#ifndef WCFG_INGEST_HPP
#define WCFG_INGEST_HPP

#include <optional>
#include <string>
#include <vector>

#include "wcfg/grammar.hpp"
#include "wcfg/io.hpp"

namespace wcfg {

// A treebank: constituency trees with string labels, one s-expression per
// tree (single-line or multi-line blocks both parse).
struct Treebank {
  std::vector<LabeledTree> trees;
};

Treebank parse_treebank(const std::string& text);
Treebank read_treebank(const std::string& path);

struct ExtractOptions {
  // Strip label annotations: everything from the first delimiter occurrence
  // onward.  Without an explicit delimiter, the first of "-", "=", "##"
  // present in a label is used.  Stripping never empties a label.
  bool strip_annotations = false;
  std::optional<std::string> delimiter;
};

struct ExtractResult {
  Grammar grammar;
  // Root-label counts behind the start-symbol choice, majority first.
  std::vector<std::pair<std::string, std::size_t>> root_counts;
  bool start_tie_broken = false;
};

// Maximum-likelihood grammar extraction: collapses nonterminal unary chains
// by splicing single nonterminal children upward, optionally strips label
// annotations, counts the remaining rules, and weighs each rule by
// count(rule)/count(lhs) in the real semiring.  The start symbol is the
// majority root label (ties broken lexicographically and flagged).  Raises
// NullaryInTreebank if any internal node has no children.
ExtractResult extract_grammar_full(const Treebank& tb,
                                   const ExtractOptions& options = {});
Grammar extract_grammar(const Treebank& tb, const ExtractOptions& options = {});

}  // namespace wcfg

#endif  // WCFG_INGEST_HPP
