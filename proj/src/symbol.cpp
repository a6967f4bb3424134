#include "wcfg/symbol.hpp"

#include <atomic>
#include <functional>

namespace wcfg {

namespace {

std::atomic<TransformId> g_next_transform_id{1};

std::size_t hash_mix(std::size_t seed, std::size_t v) {
  // boost::hash_combine mixing constant.
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

TransformId fresh_transform_id() { return g_next_transform_id.fetch_add(1); }

void note_transform_id(TransformId id) {
  TransformId want = id + 1;
  TransformId cur = g_next_transform_id.load();
  while (cur < want && !g_next_transform_id.compare_exchange_weak(cur, want)) {
  }
}

Symbol Symbol::terminal(std::string name) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::terminal;
  rep->name = std::move(name);
  rep->hash = hash_mix(0, std::hash<std::string>{}(rep->name));
  return Symbol(std::move(rep));
}

Symbol Symbol::nonterminal(std::string name) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::nonterminal;
  rep->name = std::move(name);
  rep->hash = hash_mix(1, std::hash<std::string>{}(rep->name));
  return Symbol(std::move(rep));
}

Symbol Symbol::frozen(const Symbol& base, TransformId id) {
  if (base.is_terminal()) return base;
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::frozen;
  rep->a = std::make_shared<Symbol>(base);
  rep->tid = id;
  rep->hash = hash_mix(hash_mix(2, base.hash()), id);
  return Symbol(std::move(rep));
}

Symbol Symbol::slashed(const Symbol& numerator, const Symbol& denominator,
                       TransformId id) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::slashed;
  rep->a = std::make_shared<Symbol>(numerator);
  rep->b = std::make_shared<Symbol>(denominator);
  rep->tid = id;
  rep->hash =
      hash_mix(hash_mix(hash_mix(3, numerator.hash()), denominator.hash()), id);
  return Symbol(std::move(rep));
}

bool operator==(const Symbol& x, const Symbol& y) {
  if (x.rep_ == y.rep_) return true;
  if (x.rep_->hash != y.rep_->hash) return false;
  return Symbol::compare(x, y) == 0;
}

int Symbol::compare(const Symbol& x, const Symbol& y) {
  if (x.rep_ == y.rep_) return 0;
  if (x.kind() != y.kind()) return x.kind() < y.kind() ? -1 : 1;
  switch (x.kind()) {
    case Kind::terminal:
    case Kind::nonterminal:
      return x.name().compare(y.name());
    case Kind::frozen: {
      int c = compare(x.base(), y.base());
      if (c != 0) return c;
      if (x.transform_id() != y.transform_id())
        return x.transform_id() < y.transform_id() ? -1 : 1;
      return 0;
    }
    case Kind::slashed: {
      int c = compare(x.numerator(), y.numerator());
      if (c != 0) return c;
      c = compare(x.denominator(), y.denominator());
      if (c != 0) return c;
      if (x.transform_id() != y.transform_id())
        return x.transform_id() < y.transform_id() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

}  // namespace wcfg
