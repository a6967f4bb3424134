#include "wcfg/derivmap.hpp"

#include <algorithm>

#include "wcfg/errors.hpp"
#include "wcfg/io.hpp"

namespace wcfg {

namespace {

// Rule content key for resolving trees whose indices refer to a different
// (e.g. trimmed) copy of a grammar.
std::string content_key(const Rule& r) {
  std::string key = symbol_to_string(r.lhs);
  key += " ->";
  for (const Symbol& s : r.rhs) {
    key += ' ';
    key += symbol_to_string(s);
  }
  key += " @";
  key += weight_to_string(r.weight);
  return key;
}

std::vector<DerivPtr> spine_nodes(const DerivPtr& t,
                                  const TransformParams& params) {
  std::vector<DerivPtr> nodes;
  DerivPtr cur = t;
  while (!cur->is_leaf() && cur->rule_index() >= 0 &&
         params.in_p(static_cast<std::size_t>(cur->rule_index()))) {
    nodes.push_back(cur);
    cur = cur->children()[0];  // recognition rules are never nullary
  }
  nodes.push_back(cur);
  return nodes;
}

}  // namespace

std::vector<Symbol> SpineDecomposition::symbols_bottom_up() const {
  std::vector<Symbol> out;
  out.reserve(nodes.size());
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    out.push_back((*it)->label());
  }
  return out;
}

SpineDecomposition spine(const DerivPtr& t, const TransformParams& params) {
  if (t->is_leaf()) {
    raise(Errc::invalid_params, "spine of a bare terminal is undefined");
  }
  return SpineDecomposition{spine_nodes(t, params)};
}

LeftCornerResult left_corner(const DerivPtr& t, const TransformParams& params) {
  std::vector<DerivPtr> nodes = spine_nodes(t, params);
  const std::size_t k = nodes.size();
  for (std::size_t i = 1; i <= k; ++i) {  // bottom-up
    const DerivPtr& node = nodes[k - i];
    if (params.in_x(node->label())) return LeftCornerResult{node, i};
  }
  return LeftCornerResult{};
}

// --- DerivationMapper --------------------------------------------------------

DerivationMapper::DerivationMapper(const Grammar& g,
                                   const TransformParams& params)
    : source_(g), params_(params), output_(glct_with_provenance(g, params)) {
  const auto& rules = output_.grammar.rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Rule& r = rules[i];
    const RuleProvenance& p = output_.provenance[i];
    switch (p.origin) {
      case RuleOrigin::recover_frozen:
        recover_frozen_.emplace(r.lhs, i);
        break;
      case RuleOrigin::recover_slash:
        recover_slash_.emplace(
            std::make_pair(r.lhs, r.rhs[1].denominator()), i);
        break;
      case RuleOrigin::slash_base:
        slash_base_.emplace(r.lhs.numerator(), i);
        break;
      case RuleOrigin::slash_step:
        slash_step_.emplace(std::make_pair(p.source_rule, r.lhs.numerator()),
                            i);
        break;
      case RuleOrigin::frozen_base:
        frozen_base_.emplace(p.source_rule, i);
        break;
      case RuleOrigin::frozen_step:
        frozen_step_.emplace(p.source_rule, i);
        break;
    }
    by_content_.emplace(content_key(r), i);
  }
}

DerivPtr DerivationMapper::forward(const DerivPtr& t) const {
  if (!derivation_in_grammar(source_, t)) {
    raise(Errc::foreign_rule, "derivation uses rules outside the source grammar");
  }
  return forward_node(t);
}

std::vector<DerivPtr> DerivationMapper::forward_sequence(
    const std::vector<DerivPtr>& ts) const {
  std::vector<DerivPtr> out;
  out.reserve(ts.size());
  for (const DerivPtr& t : ts) out.push_back(forward(t));
  return out;
}

std::vector<DerivPtr> DerivationMapper::inverse_sequence(
    const std::vector<DerivPtr>& ts) const {
  std::vector<DerivPtr> out;
  out.reserve(ts.size());
  for (const DerivPtr& t : ts) out.push_back(inverse(t));
  return out;
}

// Frozen image of the spine levels 1..upto: the bottom level transfers its
// non-recognition rule (or stays a terminal), each level above freezes its
// corner slot, and every off-spine subtree is mapped recursively.
DerivPtr DerivationMapper::frozen_subtree(
    const std::vector<DerivPtr>& spine_nodes, std::size_t upto) const {
  const std::size_t k = spine_nodes.size();
  const DerivPtr& bottom = spine_nodes[k - 1];
  DerivPtr cur;
  if (bottom->is_leaf()) {
    cur = bottom;
  } else {
    std::size_t idx = frozen_base_.at(bottom->rule_index());
    std::vector<DerivPtr> kids;
    kids.reserve(bottom->children().size());
    for (const DerivPtr& c : bottom->children()) kids.push_back(forward_node(c));
    cur = Derivation::node(output_.grammar.rule(idx), static_cast<int>(idx),
                           std::move(kids));
  }
  for (std::size_t level = 2; level <= upto; ++level) {
    const DerivPtr& sn = spine_nodes[k - level];
    std::size_t idx = frozen_step_.at(sn->rule_index());
    std::vector<DerivPtr> kids;
    kids.reserve(sn->children().size());
    kids.push_back(cur);
    for (std::size_t j = 1; j < sn->children().size(); ++j) {
      kids.push_back(forward_node(sn->children()[j]));
    }
    cur = Derivation::node(output_.grammar.rule(idx), static_cast<int>(idx),
                           std::move(kids));
  }
  return cur;
}

DerivPtr DerivationMapper::forward_node(const DerivPtr& t) const {
  if (t->is_leaf()) return t;

  std::vector<DerivPtr> sn = spine_nodes(t, params_);
  const std::size_t k = sn.size();
  std::size_t k_hat = 0;  // 0 = no corner
  for (std::size_t i = 1; i <= k; ++i) {
    if (params_.in_x(sn[k - i]->label())) {
      k_hat = i;
      break;
    }
  }

  if (k_hat == 0) {
    DerivPtr child = frozen_subtree(sn, k);
    std::size_t idx = recover_frozen_.at(t->label());
    return Derivation::node(output_.grammar.rule(idx), static_cast<int>(idx),
                            {std::move(child)});
  }

  DerivPtr left = frozen_subtree(sn, k_hat);
  // Right-recursive slashed chain, built upward from the empty base.
  std::size_t base_idx = slash_base_.at(t->label());
  DerivPtr acc = Derivation::node(output_.grammar.rule(base_idx),
                                  static_cast<int>(base_idx), {});
  for (std::size_t i = k - 1; i >= k_hat; --i) {
    const DerivPtr& sn_node = sn[k - 1 - i];  // expands X_{i+1} -> X_i ...
    std::size_t idx =
        slash_step_.at(std::make_pair(sn_node->rule_index(), t->label()));
    std::vector<DerivPtr> kids;
    kids.reserve(sn_node->children().size());
    for (std::size_t j = 1; j < sn_node->children().size(); ++j) {
      kids.push_back(forward_node(sn_node->children()[j]));
    }
    kids.push_back(std::move(acc));
    acc = Derivation::node(output_.grammar.rule(idx), static_cast<int>(idx),
                           std::move(kids));
    if (i == k_hat) break;
  }
  std::size_t idx =
      recover_slash_.at(std::make_pair(t->label(), sn[k - k_hat]->label()));
  return Derivation::node(output_.grammar.rule(idx), static_cast<int>(idx),
                          {std::move(left), std::move(acc)});
}

struct DerivationMapper::Resolved {
  std::size_t index;
  RuleOrigin origin;
  int source_rule;
};

DerivationMapper::Resolved DerivationMapper::resolve(const DerivPtr& t) const {
  const auto& rules = output_.grammar.rules();
  int idx = t->rule_index();
  if (idx >= 0 && static_cast<std::size_t>(idx) < rules.size() &&
      rules[idx] == t->rule()) {
    const RuleProvenance& p = output_.provenance[idx];
    return Resolved{static_cast<std::size_t>(idx), p.origin, p.source_rule};
  }
  auto it = by_content_.find(content_key(t->rule()));
  if (it == by_content_.end()) {
    raise(Errc::foreign_rule, "rule '" + content_key(t->rule()) +
                                  "' is not part of the transform output");
  }
  const RuleProvenance& p = output_.provenance[it->second];
  return Resolved{it->second, p.origin, p.source_rule};
}

DerivPtr DerivationMapper::inverse(const DerivPtr& t) const {
  return inverse_node(t);
}

DerivPtr DerivationMapper::inverse_node(const DerivPtr& t) const {
  if (t->is_leaf()) {
    if (!source_.has_terminal(t->label())) {
      raise(Errc::foreign_rule,
            "terminal " + symbol_to_string(t->label()) + " is not in the grammar");
    }
    return t;
  }

  // Rebuilds the original spine segment hidden inside a frozen chain.
  auto rebuild_frozen = [&](const DerivPtr& frozen_root) -> DerivPtr {
    std::vector<std::pair<std::size_t, DerivPtr>> steps;
    DerivPtr cur = frozen_root;
    while (!cur->is_leaf()) {
      Resolved r = resolve(cur);
      if (r.origin != RuleOrigin::frozen_step) break;
      steps.emplace_back(static_cast<std::size_t>(r.source_rule), cur);
      cur = cur->children()[0];
    }
    DerivPtr tree;
    if (cur->is_leaf()) {
      tree = inverse_node(cur);
    } else {
      Resolved r = resolve(cur);
      if (r.origin != RuleOrigin::frozen_base) {
        raise(Errc::malformed_shape,
              "frozen chain does not end in a frozen base rule");
      }
      std::vector<DerivPtr> kids;
      kids.reserve(cur->children().size());
      for (const DerivPtr& c : cur->children()) kids.push_back(inverse_node(c));
      tree = Derivation::node(source_.rule(r.source_rule),
                              static_cast<int>(r.source_rule), std::move(kids));
    }
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      const DerivPtr& step = it->second;
      std::vector<DerivPtr> kids;
      kids.reserve(step->children().size());
      kids.push_back(tree);
      for (std::size_t j = 1; j < step->children().size(); ++j) {
        kids.push_back(inverse_node(step->children()[j]));
      }
      tree = Derivation::node(source_.rule(it->first),
                              static_cast<int>(it->first), std::move(kids));
    }
    return tree;
  };

  Resolved root = resolve(t);
  if (root.origin == RuleOrigin::recover_frozen) {
    return rebuild_frozen(t->children()[0]);
  }
  if (root.origin != RuleOrigin::recover_slash) {
    raise(Errc::malformed_shape,
          "root of an original-labeled tree must be a recovery rule");
  }

  // Walk the right-recursive slashed chain, collecting one original spine
  // rule per step, then stack them back up above the rebuilt corner.
  std::vector<std::pair<std::size_t, DerivPtr>> chain;
  DerivPtr cur = t->children()[1];
  while (true) {
    Resolved r = resolve(cur);
    if (r.origin == RuleOrigin::slash_base) {
      if (!cur->children().empty()) {
        raise(Errc::malformed_shape, "slash base with children");
      }
      break;
    }
    if (r.origin != RuleOrigin::slash_step) {
      raise(Errc::malformed_shape, "slashed chain interrupted");
    }
    chain.emplace_back(static_cast<std::size_t>(r.source_rule), cur);
    cur = cur->children().back();
  }

  DerivPtr tree = rebuild_frozen(t->children()[0]);
  for (const auto& [src, step] : chain) {
    std::vector<DerivPtr> kids;
    kids.reserve(step->children().size());
    kids.push_back(tree);
    for (std::size_t j = 0; j + 1 < step->children().size(); ++j) {
      kids.push_back(inverse_node(step->children()[j]));
    }
    tree = Derivation::node(source_.rule(src), static_cast<int>(src),
                            std::move(kids));
  }
  if (tree->label() != t->label()) {
    raise(Errc::malformed_shape, "recovered spine does not rebuild the root");
  }
  return tree;
}

// --- SpecGlctMapper -----------------------------------------------------------

SpecGlctMapper::SpecGlctMapper(const Grammar& g, const TransformParams& params)
    : source_(g),
      params_(params),
      spec_(speculate_with_provenance(g, params)),
      glct_(glct_with_provenance(g, params)) {
  auto fill = [](const TransformedGrammar& side, Tables& tab, bool spec_side) {
    const auto& rules = side.grammar.rules();
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const Rule& r = rules[i];
      const RuleProvenance& p = side.provenance[i];
      switch (p.origin) {
        case RuleOrigin::recover_frozen:
          tab.recover_frozen.emplace(r.lhs, i);
          break;
        case RuleOrigin::recover_slash:
          tab.recover_slash.emplace(
              std::make_pair(r.lhs, r.rhs[1].denominator()), i);
          break;
        case RuleOrigin::slash_base:
          tab.slash_base.emplace(r.lhs.numerator(), i);
          break;
        case RuleOrigin::slash_step:
          // Speculation instantiates one step per denominator, GLCT one per
          // numerator; key on whichever is carried down the chain.
          tab.slash_step.emplace(
              std::make_pair(p.source_rule, spec_side ? r.lhs.denominator()
                                                      : r.lhs.numerator()),
              i);
          break;
        case RuleOrigin::frozen_base:
          tab.frozen_base.emplace(p.source_rule, i);
          break;
        case RuleOrigin::frozen_step:
          tab.frozen_step.emplace(p.source_rule, i);
          break;
      }
      tab.by_content.emplace(content_key(r), i);
    }
  };
  fill(spec_, spec_tab_, true);
  fill(glct_, glct_tab_, false);
}

const RuleProvenance& SpecGlctMapper::resolve(const TransformedGrammar& side,
                                              const Tables& tab,
                                              const DerivPtr& t,
                                              std::size_t* index) const {
  const auto& rules = side.grammar.rules();
  int idx = t->rule_index();
  if (idx >= 0 && static_cast<std::size_t>(idx) < rules.size() &&
      rules[idx] == t->rule()) {
    *index = static_cast<std::size_t>(idx);
    return side.provenance[idx];
  }
  auto it = tab.by_content.find(content_key(t->rule()));
  if (it == tab.by_content.end()) {
    raise(Errc::foreign_rule, "rule '" + content_key(t->rule()) +
                                  "' is not part of the transform output");
  }
  *index = it->second;
  return side.provenance[it->second];
}

DerivPtr SpecGlctMapper::spec_to_glct(const DerivPtr& t) const {
  return map_tree(t, true);
}

DerivPtr SpecGlctMapper::glct_to_spec(const DerivPtr& t) const {
  return map_tree(t, false);
}

DerivPtr SpecGlctMapper::map_tree(const DerivPtr& t, bool from_spec) const {
  if (t->is_leaf()) return t;
  const TransformedGrammar& from = from_spec ? spec_ : glct_;
  const TransformedGrammar& to = from_spec ? glct_ : spec_;
  const Tables& from_tab = from_spec ? spec_tab_ : glct_tab_;
  const Tables& to_tab = from_spec ? glct_tab_ : spec_tab_;

  auto make = [&](std::size_t idx, std::vector<DerivPtr> kids) {
    return Derivation::node(to.grammar.rule(idx), static_cast<int>(idx),
                            std::move(kids));
  };

  std::size_t idx = 0;
  const RuleProvenance& prov = resolve(from, from_tab, t, &idx);
  switch (prov.origin) {
    case RuleOrigin::recover_frozen:
      return make(to_tab.recover_frozen.at(t->label()),
                  {map_tree(t->children()[0], from_spec)});
    case RuleOrigin::recover_slash: {
      const Symbol corner = t->rule().rhs[1].denominator();
      return make(to_tab.recover_slash.at(std::make_pair(t->label(), corner)),
                  {map_tree(t->children()[0], from_spec),
                   map_tree(t->children()[1], from_spec)});
    }
    case RuleOrigin::frozen_base: {
      std::vector<DerivPtr> kids;
      for (const DerivPtr& c : t->children()) {
        kids.push_back(map_tree(c, from_spec));
      }
      return make(to_tab.frozen_base.at(prov.source_rule), std::move(kids));
    }
    case RuleOrigin::frozen_step: {
      std::vector<DerivPtr> kids;
      for (const DerivPtr& c : t->children()) {
        kids.push_back(map_tree(c, from_spec));
      }
      return make(to_tab.frozen_step.at(prov.source_rule), std::move(kids));
    }
    case RuleOrigin::slash_base:
      return make(to_tab.slash_base.at(from_spec ? t->label().denominator()
                                                 : t->label().numerator()),
                  {});
    case RuleOrigin::slash_step:
      break;  // chain handling below
  }

  // Slashed chain: collect one (rule, off-spine subtrees) pair per step —
  // the chains carry the same rule multiset, branching opposite ways — and
  // rebuild in the other orientation from the empty base upward.
  std::vector<std::pair<int, std::vector<DerivPtr>>> steps;
  DerivPtr cur = t;
  while (true) {
    std::size_t cur_idx = 0;
    const RuleProvenance& p = resolve(from, from_tab, cur, &cur_idx);
    if (p.origin == RuleOrigin::slash_base) {
      if (!cur->children().empty()) {
        raise(Errc::malformed_shape, "slash base with children");
      }
      break;
    }
    if (p.origin != RuleOrigin::slash_step) {
      raise(Errc::malformed_shape, "slashed chain interrupted");
    }
    const auto& kids = cur->children();
    std::vector<DerivPtr> rest;
    if (from_spec) {
      rest.assign(kids.begin() + 1, kids.end());
      steps.emplace_back(p.source_rule, std::move(rest));
      cur = kids.front();
    } else {
      rest.assign(kids.begin(), kids.end() - 1);
      steps.emplace_back(p.source_rule, std::move(rest));
      cur = kids.back();
    }
  }

  // Going spec->glct the chain carrier is the numerator; going back it is
  // the denominator.
  const Symbol carrier =
      from_spec ? t->label().numerator() : t->label().denominator();
  DerivPtr acc = make(to_tab.slash_base.at(carrier), {});
  for (const auto& [src, rest] : steps) {
    std::vector<DerivPtr> kids;
    kids.reserve(rest.size() + 1);
    if (from_spec) {
      for (const DerivPtr& c : rest) kids.push_back(map_tree(c, true));
      kids.push_back(std::move(acc));
    } else {
      kids.push_back(std::move(acc));
      for (const DerivPtr& c : rest) kids.push_back(map_tree(c, false));
    }
    acc = make(to_tab.slash_step.at(std::make_pair(src, carrier)),
               std::move(kids));
  }
  return acc;
}

}  // namespace wcfg
