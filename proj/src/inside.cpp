#include "wcfg/inside.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <sstream>

#include "wcfg/errors.hpp"
#include "wcfg/io.hpp"

namespace wcfg {

namespace {

// Shared structural analysis: dense symbol ids, nullable symbols, and the
// unit-step graph whose acyclicity certifies finitely many derivations per
// yield.
struct Analysis {
  const Grammar* g;
  std::vector<Symbol> symbols;  // sorted: terminals first by symbol order
  std::vector<bool> nullable;
  std::vector<Weight> null_weight;
  std::vector<std::vector<std::pair<int, Weight>>> unit_in;  // lhs <- (child, w)
  std::vector<int> topo;  // every symbol id, unit dependencies first
  std::vector<std::vector<std::size_t>> rules_by_lhs;
  std::vector<std::vector<int>> rhs_ids;  // per rule, -1 never occurs
  std::vector<int> lhs_ids;

  int id(const Symbol& s) const {
    auto it = std::lower_bound(symbols.begin(), symbols.end(), s);
    if (it == symbols.end() || !(*it == s)) return -1;
    return static_cast<int>(it - symbols.begin());
  }
};

Analysis analyze(const Grammar& g) {
  Analysis a;
  a.g = &g;
  a.symbols.reserve(g.terminals().size() + g.nonterminals().size());
  std::merge(g.terminals().begin(), g.terminals().end(),
             g.nonterminals().begin(), g.nonterminals().end(),
             std::back_inserter(a.symbols));
  const std::size_t n = a.symbols.size();
  const Semiring& s = g.semiring();

  a.rules_by_lhs.assign(n, {});
  a.lhs_ids.resize(g.rule_count());
  a.rhs_ids.resize(g.rule_count());
  for (std::size_t r = 0; r < g.rule_count(); ++r) {
    int lhs = a.id(g.rule(r).lhs);
    a.lhs_ids[r] = lhs;
    a.rules_by_lhs[lhs].push_back(r);
    for (const Symbol& sym : g.rule(r).rhs) {
      a.rhs_ids[r].push_back(a.id(sym));
    }
  }

  // Nullable fixpoint.
  a.nullable.assign(n, false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t r = 0; r < g.rule_count(); ++r) {
      if (a.nullable[a.lhs_ids[r]]) continue;
      bool all = true;
      for (int sym : a.rhs_ids[r]) {
        if (!a.nullable[sym]) {
          all = false;
          break;
        }
      }
      if (all) {
        a.nullable[a.lhs_ids[r]] = true;
        changed = true;
      }
    }
  }

  // Unit-step edges (presence only, weights after the null weights exist):
  // lhs -> rhs[j] where rhs[j] is a nonterminal and all other positions are
  // nullable.
  std::vector<std::vector<int>> unit_children(n);
  for (std::size_t r = 0; r < g.rule_count(); ++r) {
    const auto& rhs = a.rhs_ids[r];
    if (rhs.empty()) continue;
    int non_nullable = 0, candidate = -1;
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      if (!a.nullable[rhs[j]]) {
        ++non_nullable;
        candidate = static_cast<int>(j);
      }
    }
    auto consider = [&](std::size_t j) {
      if (a.symbols[rhs[j]].is_terminal()) return;
      unit_children[a.lhs_ids[r]].push_back(rhs[j]);
    };
    if (non_nullable == 1) {
      consider(static_cast<std::size_t>(candidate));
    } else if (non_nullable == 0) {
      for (std::size_t j = 0; j < rhs.size(); ++j) consider(j);
    }
  }

  // Topological order over unit edges, children first; a cycle means some
  // derivation pumps without growing its yield.
  std::vector<int> indeg(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    std::sort(unit_children[x].begin(), unit_children[x].end());
    unit_children[x].erase(
        std::unique(unit_children[x].begin(), unit_children[x].end()),
        unit_children[x].end());
    indeg[x] = static_cast<int>(unit_children[x].size());
  }
  std::vector<std::vector<int>> dependents(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (int y : unit_children[x]) dependents[y].push_back(static_cast<int>(x));
  }
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (std::size_t x = 0; x < n; ++x) {
    if (indeg[x] == 0) ready.push(static_cast<int>(x));
  }
  while (!ready.empty()) {
    int y = ready.top();
    ready.pop();
    a.topo.push_back(y);
    for (int x : dependents[y]) {
      if (--indeg[x] == 0) ready.push(x);
    }
  }
  if (a.topo.size() != n) {
    for (std::size_t x = 0; x < n; ++x) {
      if (indeg[x] > 0) {
        raise(Errc::unbounded_derivations,
              "infinitely many derivations per yield: unit cycle through " +
                  symbol_to_string(a.symbols[x]));
      }
    }
  }

  // Null weights: iterate the polynomial system from the zero vector.  With
  // an acyclic unit graph every symbol has finitely many empty-yield
  // derivations of bounded height, so the iteration reaches the exact value
  // within about n rounds.
  a.null_weight.assign(n, s.zero());
  const std::size_t cap = n + 8;
  for (std::size_t round = 0; round <= cap; ++round) {
    bool stable = true;
    std::vector<Weight> next(n, s.zero());
    for (std::size_t r = 0; r < g.rule_count(); ++r) {
      Weight w = g.rule(r).weight;
      for (int sym : a.rhs_ids[r]) {
        w = s.mul(w, a.null_weight[sym]);
        if (w == s.zero()) break;
      }
      next[a.lhs_ids[r]] = s.add(next[a.lhs_ids[r]], w);
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (!(next[x] == a.null_weight[x])) stable = false;
    }
    a.null_weight.swap(next);
    if (stable) break;
    if (round == cap) {
      raise(Errc::no_convergence, "null weights did not stabilize");
    }
  }

  // Unit-edge weights now that null weights are known.
  a.unit_in.assign(n, {});
  std::vector<std::map<int, Weight>> acc(n);
  for (std::size_t r = 0; r < g.rule_count(); ++r) {
    const auto& rhs = a.rhs_ids[r];
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      if (a.symbols[rhs[j]].is_terminal()) continue;
      Weight w = g.rule(r).weight;
      bool unit = true;
      for (std::size_t t = 0; t < rhs.size(); ++t) {
        if (t == j) continue;
        if (!a.nullable[rhs[t]]) {
          unit = false;
          break;
        }
        w = s.mul(w, a.null_weight[rhs[t]]);
      }
      if (!unit) continue;
      auto [it, fresh] = acc[a.lhs_ids[r]].emplace(rhs[j], w);
      if (!fresh) it->second = s.add(it->second, w);
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    a.unit_in[x].assign(acc[x].begin(), acc[x].end());
  }
  return a;
}

}  // namespace

struct InsideEngine::Chart {
  int n = 0;
  std::size_t syms = 0;
  std::vector<Weight> val;
  Weight& at(int sym, int i, int j) {
    return val[(static_cast<std::size_t>(sym) * (n + 1) + i) * (n + 1) + j];
  }
  Weight get(int sym, int i, int j) const {
    if (sym < 0) return 0;
    return val[(static_cast<std::size_t>(sym) * (n + 1) + i) * (n + 1) + j];
  }
};

InsideEngine::InsideEngine(const Grammar& g) : g_(&g) {
  Analysis a = analyze(g);
  symbols_ = std::move(a.symbols);
  null_ = std::move(a.null_weight);
  nullable_.resize(symbols_.size());
  for (std::size_t i = 0; i < symbols_.size(); ++i) nullable_[i] = a.nullable[i];
  unit_topo_ = std::move(a.topo);
  unit_in_ = std::move(a.unit_in);
  rules_by_lhs_ = std::move(a.rules_by_lhs);
}

int InsideEngine::sym_id(const Symbol& s) const {
  auto it = std::lower_bound(symbols_.begin(), symbols_.end(), s);
  if (it == symbols_.end() || !(*it == s)) return -1;
  return static_cast<int>(it - symbols_.begin());
}

void InsideEngine::fill_chart(std::span<const Symbol> x, Chart& chart) const {
  const Semiring& s = g_->semiring();
  const int n = static_cast<int>(x.size());
  chart.n = n;
  chart.syms = symbols_.size();
  chart.val.assign(symbols_.size() * (n + 1) * (n + 1), s.zero());

  std::vector<int> x_ids(n);
  for (int i = 0; i < n; ++i) x_ids[i] = sym_id(x[i]);

  // Empty spans carry the null weights.
  for (std::size_t sym = 0; sym < symbols_.size(); ++sym) {
    for (int i = 0; i <= n; ++i) chart.at(static_cast<int>(sym), i, i) = null_[sym];
  }
  for (int i = 0; i < n; ++i) {
    if (x_ids[i] >= 0 && symbols_[x_ids[i]].is_terminal()) {
      chart.at(x_ids[i], i, i + 1) = s.one();
    }
  }

  std::vector<int> split;  // scratch: part boundaries
  for (int len = 1; len <= n; ++len) {
    for (int i = 0; i + len <= n; ++i) {
      const int j = i + len;
      // Strict contributions: splits with at least two non-empty parts, or a
      // terminal covering the whole span.  Unit-shaped splits (one
      // nonterminal child takes the whole span, the rest empty) are excluded
      // here and folded in afterwards along the acyclic unit order.
      for (int sym : unit_topo_) {
        Weight strict = s.zero();
        const Symbol& lhs = symbols_[sym];
        if (lhs.is_terminal()) continue;
        for (std::size_t r : rules_by_lhs_[sym]) {
          const Rule& rule = g_->rule(r);
          const std::size_t k = rule.rhs.size();
          if (k == 0) continue;
          std::vector<int> rhs_ids(k);
          for (std::size_t t = 0; t < k; ++t) rhs_ids[t] = sym_id(rule.rhs[t]);
          // Monotone boundaries i = p0 <= p1 <= ... <= pk = j, enumerated in
          // lexicographic order.
          split.assign(k + 1, i);
          split[k] = j;
          while (true) {
            int nonempty = -1;
            int nonempty_count = 0;
            for (std::size_t t = 0; t < k; ++t) {
              if (split[t + 1] > split[t]) {
                ++nonempty_count;
                nonempty = static_cast<int>(t);
              }
            }
            bool unit_shaped = nonempty_count == 1 &&
                               split[nonempty + 1] - split[nonempty] == len &&
                               !rule.rhs[nonempty].is_terminal();
            if (!unit_shaped) {
              Weight w = rule.weight;
              for (std::size_t t = 0; t < k; ++t) {
                int sid = rhs_ids[t];
                if (sid < 0) {
                  w = s.zero();
                  break;
                }
                w = s.mul(w, chart.get(sid, split[t], split[t + 1]));
                if (w == s.zero()) break;
              }
              strict = s.add(strict, w);
            }
            // Advance: bump the rightmost inner boundary below j, then pull
            // everything after it up to the same point.
            std::size_t t = k;
            bool advanced = false;
            while (t > 1) {
              --t;
              if (split[t] < j) {
                ++split[t];
                for (std::size_t u = t + 1; u < k; ++u) split[u] = split[t];
                advanced = true;
                break;
              }
            }
            if (!advanced) break;
          }
        }
        chart.at(sym, i, j) = strict;
      }
      // Unit closure in dependency order.
      for (int sym : unit_topo_) {
        Weight total = chart.at(sym, i, j);
        for (const auto& [child, w] : unit_in_[sym]) {
          total = s.add(total, s.mul(w, chart.at(child, i, j)));
        }
        chart.at(sym, i, j) = total;
      }
    }
  }
}

Weight InsideEngine::string_weight(const Symbol& root,
                                   std::span<const Symbol> x) const {
  int id = sym_id(root);
  if (id < 0) return g_->semiring().zero();
  Chart chart;
  fill_chart(x, chart);
  return chart.get(id, 0, static_cast<int>(x.size()));
}

Weight InsideEngine::null_weight(const Symbol& sym) const {
  int id = sym_id(sym);
  return id < 0 ? g_->semiring().zero() : null_[id];
}

Weight string_weight(const Grammar& g, const Symbol& root,
                     std::span<const Symbol> x) {
  return InsideEngine(g).string_weight(root, x);
}

// --- enumeration route ------------------------------------------------------

namespace {

class YieldEnumerator {
 public:
  YieldEnumerator(const Grammar& g, std::span<const Symbol> x)
      : g_(g), a_(analyze(g)), x_(x.begin(), x.end()) {}

  std::vector<DerivPtr> trees(const Symbol& root) {
    int id = a_.id(root);
    if (id < 0) return {};
    return trees_for(id, 0, static_cast<int>(x_.size()));
  }

 private:
  const std::vector<DerivPtr>& trees_for(int sym, int i, int j) {
    auto key = std::make_tuple(sym, i, j);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    std::vector<DerivPtr> out;
    const Symbol& symbol = a_.symbols[sym];
    if (symbol.is_terminal()) {
      if (j - i == 1 && x_[i] == symbol) {
        out.push_back(Derivation::leaf(symbol));
      }
    } else {
      for (std::size_t r : a_.rules_by_lhs[sym]) {
        expand(r, i, j, out);
      }
    }
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

  void expand(std::size_t r, int i, int j, std::vector<DerivPtr>& out) {
    const Rule& rule = g_.rule(r);
    const std::size_t k = rule.rhs.size();
    if (k == 0) {
      if (i == j) {
        out.push_back(Derivation::node(rule, static_cast<int>(r), {}));
      }
      return;
    }
    std::vector<int> bounds(k + 1);
    bounds[0] = i;
    bounds[k] = j;
    enumerate_splits(r, 1, i, j, bounds, out);
  }

  void enumerate_splits(std::size_t r, std::size_t t, int lo, int j,
                        std::vector<int>& bounds, std::vector<DerivPtr>& out) {
    const Rule& rule = g_.rule(r);
    const std::size_t k = rule.rhs.size();
    if (t == k) {
      emit(r, bounds, out);
      return;
    }
    for (int p = lo; p <= j; ++p) {
      bounds[t] = p;
      enumerate_splits(r, t + 1, p, j, bounds, out);
    }
  }

  void emit(std::size_t r, const std::vector<int>& bounds,
            std::vector<DerivPtr>& out) {
    const Rule& rule = g_.rule(r);
    const std::size_t k = rule.rhs.size();
    std::vector<int> ids(k);
    for (std::size_t t = 0; t < k; ++t) {
      ids[t] = a_.id(rule.rhs[t]);
      if (ids[t] < 0) return;
      // Reject empty parts for non-nullable symbols before recursing; the
      // only same-span recursion left then runs along the (acyclic) unit
      // edges.
      if (bounds[t] == bounds[t + 1] && !a_.nullable[ids[t]]) return;
    }
    std::vector<const std::vector<DerivPtr>*> pools(k);
    for (std::size_t t = 0; t < k; ++t) {
      pools[t] = &trees_for(ids[t], bounds[t], bounds[t + 1]);
      if (pools[t]->empty()) return;
    }
    std::vector<std::size_t> pick(k, 0);
    while (true) {
      std::vector<DerivPtr> kids(k);
      for (std::size_t t = 0; t < k; ++t) kids[t] = (*pools[t])[pick[t]];
      out.push_back(
          Derivation::node(rule, static_cast<int>(r), std::move(kids)));
      std::size_t t = k;
      while (t > 0) {
        --t;
        if (++pick[t] < pools[t]->size()) break;
        pick[t] = 0;
        if (t == 0) return;
      }
    }
  }

  const Grammar& g_;
  Analysis a_;
  std::vector<Symbol> x_;
  std::map<std::tuple<int, int, int>, std::vector<DerivPtr>> memo_;
};

}  // namespace

std::vector<DerivPtr> derivations_with_yield(const Grammar& g,
                                             const Symbol& root,
                                             std::span<const Symbol> x) {
  return YieldEnumerator(g, x).trees(root);
}

Weight string_weight_by_enumeration(const Grammar& g, const Symbol& root,
                                    std::span<const Symbol> x) {
  const Semiring& s = g.semiring();
  Weight total = s.zero();
  for (const DerivPtr& t : derivations_with_yield(g, root, x)) {
    total = s.add(total, weight(t, s));
  }
  return total;
}

// --- language tables and equivalence ----------------------------------------

namespace {

std::vector<std::vector<Symbol>> strings_of_length(
    const std::vector<Symbol>& alphabet, int len) {
  std::vector<std::vector<Symbol>> out;
  if (len == 0) {
    out.emplace_back();
    return out;
  }
  if (alphabet.empty()) return out;
  std::vector<std::size_t> pick(len, 0);
  while (true) {
    std::vector<Symbol> s(len);
    for (int i = 0; i < len; ++i) s[i] = alphabet[pick[i]];
    out.push_back(std::move(s));
    int i = len;
    while (i > 0) {
      --i;
      if (++pick[i] < alphabet.size()) break;
      pick[i] = 0;
      if (i == 0) return out;
    }
  }
}

std::string join_string(const std::vector<Symbol>& x) {
  std::string out;
  for (const Symbol& s : x) {
    if (!out.empty()) out += ' ';
    out += s.name();
  }
  return out.empty() ? "ε" : out;
}

}  // namespace

LanguageTable language_table(const Grammar& g, std::vector<Symbol> roots,
                             std::vector<Symbol> alphabet, int max_len,
                             Execution exec) {
  InsideEngine engine(g);
  LanguageTable table;
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  table.alphabet = std::move(alphabet);
  table.roots = std::move(roots);
  for (int len = 0; len <= max_len; ++len) {
    auto layer = strings_of_length(table.alphabet, len);
    for (auto& s : layer) table.strings.push_back(std::move(s));
  }
  table.weights.assign(table.roots.size(),
                       std::vector<Weight>(table.strings.size(), 0));
  const long total = static_cast<long>(table.strings.size());
#ifdef WCFG_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 8) if (exec == Execution::parallel)
#endif
  for (long i = 0; i < total; ++i) {
    for (std::size_t r = 0; r < table.roots.size(); ++r) {
      table.weights[r][i] =
          engine.string_weight(table.roots[r], table.strings[i]);
    }
  }
  (void)exec;
  return table;
}

std::string EquivalenceReport::to_string() const {
  if (equivalent) {
    return "equivalent (" + std::to_string(strings_checked) +
           " strings checked)";
  }
  std::ostringstream out;
  out << "mismatch at \"" << mismatch << "\": " << weight_to_string(lhs)
      << " vs " << weight_to_string(rhs);
  return out.str();
}

EquivalenceReport equivalence_check(const Grammar& a, const Grammar& b,
                                    int max_len, bool include_empty,
                                    Execution exec) {
  if (!(a.semiring() == b.semiring())) {
    raise(Errc::invalid_params,
          "equivalence check needs a common semiring on both grammars");
  }
  const Semiring& s = a.semiring();
  InsideEngine ea(a), eb(b);

  std::vector<Symbol> alpha;
  std::set_union(a.terminals().begin(), a.terminals().end(),
                 b.terminals().begin(), b.terminals().end(),
                 std::back_inserter(alpha));

  EquivalenceReport report;
  for (int len = include_empty ? 0 : 1; len <= max_len; ++len) {
    auto layer = strings_of_length(alpha, len);
    std::vector<Weight> wa(layer.size()), wb(layer.size());
    const long total = static_cast<long>(layer.size());
#ifdef WCFG_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 8) if (exec == Execution::parallel)
#endif
    for (long i = 0; i < total; ++i) {
      wa[i] = ea.string_weight(a.start(), layer[i]);
      wb[i] = eb.string_weight(b.start(), layer[i]);
    }
    (void)exec;
    report.strings_checked += layer.size();
    for (std::size_t i = 0; i < layer.size(); ++i) {
      if (!s.eq(wa[i], wb[i])) {
        report.equivalent = false;
        report.mismatch = join_string(layer[i]);
        report.lhs = wa[i];
        report.rhs = wb[i];
        return report;
      }
    }
  }
  return report;
}

}  // namespace wcfg
