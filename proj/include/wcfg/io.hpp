#ifndef WCFG_IO_HPP
#define WCFG_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wcfg/grammar.hpp"
#include "wcfg/symbol.hpp"

namespace wcfg {

// --- symbol text form -------------------------------------------------------
//
//   terminal          'name'            (\' and \\ escapes)
//   nonterminal       bare token        (no whitespace or ' ~ / # ( ) :)
//                     or an angle-quoted token like <b.c> printed by the
//                     binarizer, taken verbatim up to the matching '>'
//   frozen            ~part[#id]
//   slashed           part/part[#id]
//   part              an atom, or a parenthesized symbol when composite
//
// #id is the transform-instance id.  Writers suppress it when everything
// they print carries the same single id; parse_symbol fills suppressed ids
// from SymbolTextContext so that a file (or a file/params pair) stays
// internally consistent.

struct SymbolTextContext {
  // 0 = allocate a fresh process-wide id on first use.
  TransformId default_id = 0;
  TransformId default_or_fresh();
};

std::string symbol_to_string(const Symbol& s, bool with_ids = true);
Symbol parse_symbol(const std::string& text, SymbolTextContext& ctx);

// --- .wcfg grammar files ----------------------------------------------------
//
// Line-oriented UTF-8: comment lines start with '#', a `start: <name>`
// header, then one rule per line as `<weight>: <LHS> -> <rhs...>` with an
// optional weight prefix (default 1) and `ε` standing for an empty
// right-hand side.

Grammar parse_wcfg(const std::string& text, const Semiring& semiring);
Grammar read_wcfg_file(const std::string& path, const Semiring& semiring);
std::string write_wcfg(const Grammar& g);

// --- s-expression trees -----------------------------------------------------
//
// `(S (NP 'my-sister') ...)` with `(X ε)` for childless nonterminal nodes.
// Leaves may be quoted or bare atoms; both denote terminals.

struct LabeledTree {
  std::string label;  // raw token text; terminal leaves keep unquoted names
  bool leaf = false;
  std::vector<LabeledTree> children;

  friend bool operator==(const LabeledTree& a, const LabeledTree& b) {
    return a.label == b.label && a.leaf == b.leaf && a.children == b.children;
  }
};

LabeledTree parse_sexp(const std::string& text);
// All top-level trees in the text, with 1-based line/column on errors.
std::vector<LabeledTree> parse_sexp_stream(const std::string& text);
std::string sexp_to_string(const LabeledTree& t);

// Weight text form: shortest round-trip decimal (std::to_chars).
std::string weight_to_string(Weight w);
Weight parse_weight(const std::string& text);

// Whole-file helpers; writes go through a temp file and rename.
std::string slurp_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace wcfg

#endif  // WCFG_IO_HPP
