#ifndef WCFG_SYMBOL_HPP
#define WCFG_SYMBOL_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <string>

namespace wcfg {

using TransformId = std::uint32_t;

// Hands out process-unique transform instance ids.  Ids read back from files
// are registered so that later transforms in the same process never collide
// with them.
TransformId fresh_transform_id();
void note_transform_id(TransformId id);

// Grammar symbols come in four varieties:
//   terminal(name), nonterminal(name),
//   frozen(base, transform-id), slashed(numerator, denominator, transform-id)
// Frozen and slashed symbols are created by the corner transformations and
// carry the id of the transform instance that introduced them, which keeps
// them distinct from the original nonterminals and from the output of any
// other transform instance.  Freezing a terminal is the identity.
//
// Symbols are immutable values with structural equality and a structural
// total order (kind, then fields); composites share their parts.
class Symbol {
 public:
  enum class Kind : std::uint8_t { terminal, nonterminal, frozen, slashed };

  Symbol() : Symbol(nonterminal("?")) {}

  static Symbol terminal(std::string name);
  static Symbol nonterminal(std::string name);
  static Symbol frozen(const Symbol& base, TransformId id);
  static Symbol slashed(const Symbol& numerator, const Symbol& denominator,
                        TransformId id);

  Kind kind() const { return rep_->kind; }
  bool is_terminal() const { return kind() == Kind::terminal; }
  // Frozen and slashed symbols are nonterminals of the grammars that use them.
  bool is_nonterminal() const { return kind() != Kind::terminal; }

  // Leaf accessors (terminal / nonterminal only).
  const std::string& name() const { return rep_->name; }

  // Composite accessors.
  const Symbol& base() const { return *rep_->a; }         // frozen
  const Symbol& numerator() const { return *rep_->a; }    // slashed
  const Symbol& denominator() const { return *rep_->b; }  // slashed
  TransformId transform_id() const { return rep_->tid; }

  std::size_t hash() const { return rep_->hash; }

  friend bool operator==(const Symbol& x, const Symbol& y);
  friend bool operator!=(const Symbol& x, const Symbol& y) { return !(x == y); }
  friend bool operator<(const Symbol& x, const Symbol& y) {
    return compare(x, y) < 0;
  }
  static int compare(const Symbol& x, const Symbol& y);

 private:
  struct Rep;
  explicit Symbol(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

  struct Rep {
    Kind kind;
    std::string name;  // leaves only
    std::shared_ptr<const Symbol> a, b;
    TransformId tid = 0;
    std::size_t hash = 0;
  };

  std::shared_ptr<const Rep> rep_;
};

struct SymbolHash {
  std::size_t operator()(const Symbol& s) const { return s.hash(); }
};

}  // namespace wcfg

#endif  // WCFG_SYMBOL_HPP
