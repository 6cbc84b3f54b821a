#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "alam/ac.hpp"
#include "alam/rules.hpp"

namespace alam {
namespace detail {

// Nameless serialization; equal strings iff alpha-equal terms.
inline void nameless_key_rec(const TermPtr& t, std::vector<std::string>& env,
                             std::string& out) {
  switch (t->tag()) {
    case Tag::Zero: out += 'Z'; return;
    case Tag::Var: {
      for (std::size_t i = env.size(); i-- > 0;)
        if (env[i] == t->name()) {
          out += 'b';
          out += std::to_string(env.size() - 1 - i);
          return;
        }
      out += 'f';
      out += t->name();
      out += ';';
      return;
    }
    case Tag::Lam:
      out += "L(";
      env.push_back(t->name());
      nameless_key_rec(t->child0(), env, out);
      env.pop_back();
      out += ')';
      return;
    case Tag::App:
      out += "A(";
      nameless_key_rec(t->child0(), env, out);
      out += ',';
      nameless_key_rec(t->child1(), env, out);
      out += ')';
      return;
    case Tag::Sum:
      out += "S(";
      nameless_key_rec(t->child0(), env, out);
      out += ',';
      nameless_key_rec(t->child1(), env, out);
      out += ')';
      return;
    case Tag::Smul:
      out += 'M';
      out += t->coeff().value().str();
      out += '(';
      nameless_key_rec(t->child0(), env, out);
      out += ')';
      return;
  }
}

inline auto nameless_key(const TermPtr& t) -> std::string {
  std::string out;
  std::vector<std::string> env;
  nameless_key_rec(t, env, out);
  return out;
}

// Identity of the full AC class (sorted everywhere, binder bodies included).
inline auto class_key(const TermPtr& t) -> std::string {
  return nameless_key(ac_canonical(t, CanonLevel::ACOnly));
}

// Applies Asso/Com steps on a whole term, optionally recording them. Used to
// move a term to its step-accessible canonical arrangement and to stage sum
// spines for rule applications; every emitted step is a genuine step of lang.
class AcDriver {
 public:
  AcDriver(TermPtr t, const Language& lang, std::vector<StepRecord>* steps)
      : cur_(std::move(t)), lang_(lang), steps_(steps) {}

  auto term() const -> const TermPtr& { return cur_; }

  void apply(RuleName rule, const Position& pos) {
    auto sub = subterm_at(cur_, pos);
    auto res = apply_rule_root(sub, rule, lang_);
    if (!res)
      throw Error("internal: AC staging step " + rule_name_str(rule) +
                  " failed at " + position_str(pos));
    cur_ = replace_at(cur_, pos, *res);
    if (steps_) steps_->push_back(StepRecord{rule, pos, false, cur_});
  }

  // Rotates the sum at pos into a right-nested spine.
  void right_nest(const Position& pos) {
    Position p = pos;
    for (;;) {
      auto node = subterm_at(cur_, p);
      if (node->tag() != Tag::Sum) return;
      while (subterm_at(cur_, p)->child0()->tag() == Tag::Sum)
        apply(RuleName::Asso_R, p);
      p.push_back(1);
    }
  }

  auto spine_length(const Position& pos) const -> std::size_t {
    std::size_t k = 1;
    auto node = subterm_at(cur_, pos);
    while (node->tag() == Tag::Sum) {
      ++k;
      node = node->child1();
    }
    return k;  // number of elements = number of Sum nodes + 1
  }

  auto element_pos(const Position& pos, std::size_t i, std::size_t k)
      -> Position {
    Position p = pos;
    for (std::size_t d = 0; d + 1 < k && d < i; ++d) p.push_back(1);
    if (i + 1 < k) p.push_back(0);
    return p;
  }

  // Swaps right-nested spine elements q and q+1 (k elements total).
  void transpose(const Position& pos, std::size_t q, std::size_t k) {
    Position node = pos;
    for (std::size_t d = 0; d < q; ++d) node.push_back(1);
    if (q + 2 == k) {
      apply(RuleName::Com, node);
    } else {
      apply(RuleName::Asso_L, node);
      Position left = node;
      left.push_back(0);
      apply(RuleName::Com, left);
      apply(RuleName::Asso_R, node);
    }
  }

  // Reorders the spine so element order[i] (an index into the current spine)
  // lands in slot i. The spine must already be right-nested.
  void permute(const Position& pos, const std::vector<std::size_t>& order) {
    std::size_t k = order.size();
    std::vector<std::size_t> at(k);
    for (std::size_t i = 0; i < k; ++i) at[i] = i;
    for (std::size_t slot = 0; slot < k; ++slot) {
      std::size_t j = slot;
      while (at[j] != order[slot]) ++j;
      for (; j > slot; --j) {
        transpose(pos, j - 1, k);
        std::swap(at[j - 1], at[j]);
      }
    }
  }

  // Left-groups the first m elements: x0+(x1+(x2+R)) -> ((x0+x1)+x2)+R.
  void group_prefix(const Position& pos, std::size_t m) {
    for (std::size_t i = 0; i + 1 < m; ++i) apply(RuleName::Asso_L, pos);
  }

  // Canonical arrangement at the step-accessible positions: spines right-nested
  // and sorted; lambda bodies and frozen arguments untouched.
  void sort_accessible() { sort_rec({}); }

 private:
  void sort_rec(const Position& pos) {
    auto node = subterm_at(cur_, pos);
    switch (node->tag()) {
      case Tag::Zero:
      case Tag::Var:
      case Tag::Lam: return;
      case Tag::Smul: {
        Position p = pos;
        p.push_back(0);
        sort_rec(p);
        return;
      }
      case Tag::App: {
        Position p = pos;
        p.push_back(0);
        sort_rec(p);
        if (is_cbv(lang_) && is_value(subterm_at(cur_, p))) {
          p.back() = 1;
          sort_rec(p);
        }
        return;
      }
      case Tag::Sum: {
        right_nest(pos);
        std::size_t k = spine_length(pos);
        for (std::size_t i = 0; i < k; ++i) sort_rec(element_pos(pos, i, k));
        // Selection sort with adjacent transpositions.
        for (std::size_t slot = 0; slot + 1 < k; ++slot) {
          std::size_t best = slot;
          for (std::size_t i = slot + 1; i < k; ++i) {
            auto a = subterm_at(cur_, element_pos(pos, i, k));
            auto b = subterm_at(cur_, element_pos(pos, best, k));
            if (term_compare(a, b) < 0) best = i;
          }
          for (std::size_t j = best; j > slot; --j) transpose(pos, j - 1, k);
        }
        return;
      }
    }
  }

  TermPtr cur_;
  Language lang_;
  std::vector<StepRecord>* steps_;
};

inline auto canon_accessible(const TermPtr& t, const Language& lang) -> TermPtr {
  AcDriver d(t, lang, nullptr);
  d.sort_accessible();
  return d.term();
}

// State identity for search frontiers: canonical at accessible positions.
inline auto state_key(const TermPtr& t, const Language& lang) -> std::string {
  return nameless_key(canon_accessible(t, lang));
}

// One search edge = Asso/Com staging plus a single non-AC step, enumerated on
// the canonical representative; `child` is the resulting term.
struct MacroEdge {
  enum class Kind {
    Plain,      // rule fires at pos as-is
    Merge,      // F rule on spine elements i, j at spine pos
    DropZero,   // S_zero_sum dropping element i
    SplitFun,   // A_app_sum / Al_sum at App pos, mask selects fun-spine prefix
    SplitArg,   // Ar_sum at App pos, mask over arg spine
    SplitSmul,  // S_dist at Smul pos, mask over body spine
    RevPlain,   // reversed rule at pos, rev_sub is the replacement subterm
    RevPair,    // reversed pair rule on spine elements i, j
  };
  Kind kind;
  RuleName rule;
  Position pos;
  std::size_t i = 0, j = 0;
  unsigned mask = 0;
  TermPtr rev_sub;  // RevPlain / RevPair replacement node
  TermPtr child;
};

inline auto spine_of(const TermPtr& t) -> std::vector<TermPtr> {
  std::vector<TermPtr> parts;
  flatten_sum(t, parts);
  return parts;
}

inline auto rebuild_prefix_grouped(const std::vector<TermPtr>& xs,
                                   const std::vector<TermPtr>& ys) -> TermPtr {
  // Matches AcDriver::group_prefix: prefix left-nested, remainder right-nested.
  TermPtr left = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) left = Term::sum(left, xs[i]);
  if (ys.empty()) return left;
  return Term::sum(left, rebuild_sum(ys));
}

inline constexpr std::size_t kMaxSplitSpine = 6;

struct EdgeOptions {
  bool include_beta = true;
  AdmitFn admit;
};

class EdgeEnumerator {
 public:
  EdgeEnumerator(TermPtr canon, const Language& lang, const EdgeOptions& opt)
      : c_(std::move(canon)), lang_(lang), opt_(opt) {
    if (is_symmetric(lang_)) pool_ = reverse_scalar_candidates(c_);
  }

  auto run() -> std::vector<MacroEdge> {
    Position pos;
    walk(c_, pos);
    return edges_;
  }

 private:
  void emit(MacroEdge e) {
    if (opt_.admit && !opt_.admit(e.child)) return;
    edges_.push_back(std::move(e));
  }

  void plain_rules(const TermPtr& u, const Position& pos) {
    for (int r = 0; r < kRuleCount; ++r) {
      auto rule = static_cast<RuleName>(r);
      if (is_ac_rule(rule)) continue;
      if (is_beta_rule(rule) && !opt_.include_beta) continue;
      // Sum-splitting rules are handled as spine edges with explicit masks.
      if (rule == RuleName::A_app_sum || rule == RuleName::Al_sum ||
          rule == RuleName::Ar_sum || rule == RuleName::S_dist ||
          rule == RuleName::F_fact || rule == RuleName::F_fact1 ||
          rule == RuleName::F_fact11 || rule == RuleName::S_zero_sum)
        continue;
      if (auto res = apply_rule_root(u, rule, lang_))
        emit(MacroEdge{MacroEdge::Kind::Plain, rule, pos, 0, 0, 0, nullptr,
                       replace_at(c_, pos, *res)});
    }
    if (is_symmetric(lang_)) {
      // Node-level reverse steps (rev S_one / S_zero_sum wrap interior spine
      // nodes only at the spine top; see walk()).
      std::vector<std::pair<RuleName, TermPtr>> rev;
      reversed_rules_root(u, lang_, pool_, rev);
      for (auto& [rule, res] : rev) {
        if (rule == RuleName::Al_sum || rule == RuleName::A_app_sum ||
            rule == RuleName::Ar_sum || rule == RuleName::S_dist)
          continue;  // pair reverses handled on spines
        emit(MacroEdge{MacroEdge::Kind::RevPlain, rule, pos, 0, 0, 0, res,
                       replace_at(c_, pos, res)});
      }
    }
  }

  void spine_edges(const TermPtr& u, const Position& pos) {
    auto parts = spine_of(u);
    std::size_t k = parts.size();
    auto rest_without = [&](std::size_t i, std::size_t j) {
      std::vector<TermPtr> rest;
      for (std::size_t q = 0; q < k; ++q)
        if (q != i && q != j) rest.push_back(parts[q]);
      return rest;
    };
    // F merges on ordered pairs, matched by the actual rules on a two-term sum.
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j) continue;
        if (i > j && alpha_equal(parts[i], parts[j]))
          continue;  // symmetric pair, one orientation suffices
        auto two = Term::sum(parts[i], parts[j]);
        for (auto rule :
             {RuleName::F_fact, RuleName::F_fact1, RuleName::F_fact11}) {
          if (auto res = apply_rule_root(two, rule, lang_)) {
            std::vector<TermPtr> spine{*res};
            auto rest = rest_without(i, j);
            spine.insert(spine.end(), rest.begin(), rest.end());
            emit(MacroEdge{MacroEdge::Kind::Merge, rule, pos, i, j, 0, nullptr,
                           replace_at(c_, pos, rebuild_sum(spine))});
          }
        }
        if (is_symmetric(lang_)) {
          std::vector<std::pair<RuleName, TermPtr>> rev;
          reversed_rules_root(two, lang_, pool_, rev);
          for (auto& [rule, res] : rev) {
            if (rule != RuleName::Al_sum && rule != RuleName::A_app_sum &&
                rule != RuleName::Ar_sum && rule != RuleName::S_dist)
              continue;
            std::vector<TermPtr> spine{res};
            auto rest = rest_without(i, j);
            spine.insert(spine.end(), rest.begin(), rest.end());
            emit(MacroEdge{MacroEdge::Kind::RevPair, rule, pos, i, j, 0, res,
                           replace_at(c_, pos, rebuild_sum(spine))});
          }
        }
      }
    for (std::size_t i = 0; i < k; ++i) {
      if (parts[i]->tag() != Tag::Zero) continue;
      std::vector<TermPtr> rest;
      for (std::size_t q = 0; q < k; ++q)
        if (q != i) rest.push_back(parts[q]);
      emit(MacroEdge{MacroEdge::Kind::DropZero, RuleName::S_zero_sum, pos, i, 0,
                     0, nullptr, replace_at(c_, pos, rebuild_sum(rest))});
      break;  // canonical order sorts all zeros first; dropping one is enough
    }
  }

  // Bipartitions of a spine under an enclosing rule (application linearity or
  // S_dist). Long spines fall back to singleton prefixes.
  void split_edges(const Position& app_pos, const TermPtr& sum,
                   MacroEdge::Kind kind, RuleName rule,
                   const std::function<TermPtr(TermPtr, TermPtr)>& build) {
    auto parts = spine_of(sum);
    std::size_t k = parts.size();
    std::vector<unsigned> masks;
    if (k <= kMaxSplitSpine) {
      for (unsigned m = 1; m + 1 < (1u << k); ++m)
        if (m & 1u) masks.push_back(m);  // fix element 0 on the left, halve dup
      // Unordered bipartition {X,Y} appears twice as (X,Y)/(Y,X); both give
      // distinct terms (Sum(X',Y') vs Sum(Y',X')) that are AC-equal, so one
      // orientation per split is kept by pinning element 0 into X.
    } else {
      for (std::size_t i = 0; i < k; ++i)
        masks.push_back(static_cast<unsigned>(1u << i));
    }
    for (unsigned m : masks) {
      std::vector<TermPtr> xs, ys;
      for (std::size_t q = 0; q < k; ++q)
        ((m >> q) & 1u ? xs : ys).push_back(parts[q]);
      if (xs.empty() || ys.empty()) continue;
      auto node = build(rebuild_prefix_grouped(xs, {}), rebuild_sum(ys));
      emit(MacroEdge{kind, rule, app_pos, 0, 0, m, nullptr,
                     replace_at(c_, app_pos, node)});
    }
  }

  void walk(const TermPtr& u, Position& pos) {
    switch (u->tag()) {
      case Tag::Zero:
      case Tag::Var:
      case Tag::Lam:
        plain_rules(u, pos);
        return;
      case Tag::Smul: {
        plain_rules(u, pos);
        if (u->child0()->tag() == Tag::Sum)
          split_edges(pos, u->child0(), MacroEdge::Kind::SplitSmul,
                      RuleName::S_dist, [&](TermPtr x, TermPtr y) {
                        return Term::sum(Term::smul(u->coeff(), std::move(x)),
                                         Term::smul(u->coeff(), std::move(y)));
                      });
        pos.push_back(0);
        walk(u->child0(), pos);
        pos.pop_back();
        return;
      }
      case Tag::App: {
        plain_rules(u, pos);
        const auto& f = u->child0();
        const auto& a = u->child1();
        if (f->tag() == Tag::Sum) {
          bool ok = is_cbv(lang_) ? is_value(a) : true;
          if (ok)
            split_edges(pos, f,
                        MacroEdge::Kind::SplitFun,
                        is_cbv(lang_) ? RuleName::Al_sum : RuleName::A_app_sum,
                        [&](TermPtr x, TermPtr y) {
                          return Term::sum(Term::app(std::move(x), a),
                                           Term::app(std::move(y), a));
                        });
        }
        if (is_cbv(lang_) && is_base(f) && a->tag() == Tag::Sum)
          split_edges(pos, a, MacroEdge::Kind::SplitArg, RuleName::Ar_sum,
                      [&](TermPtr x, TermPtr y) {
                        return Term::sum(Term::app(f, std::move(x)),
                                         Term::app(f, std::move(y)));
                      });
        pos.push_back(0);
        walk(f, pos);
        pos.pop_back();
        if (is_cbv(lang_) && is_value(f)) {
          pos.push_back(1);
          walk(a, pos);
          pos.pop_back();
        }
        return;
      }
      case Tag::Sum: {
        plain_rules(u, pos);  // node-level reverses at the spine top
        spine_edges(u, pos);
        auto parts = spine_of(u);
        std::size_t k = parts.size();
        for (std::size_t i = 0; i < k; ++i) {
          Position ep = pos;
          for (std::size_t d = 0; d + 1 < k && d < i; ++d) ep.push_back(1);
          if (i + 1 < k) ep.push_back(0);
          walk(parts[i], ep);
        }
        return;
      }
    }
  }

  TermPtr c_;
  Language lang_;
  EdgeOptions opt_;
  std::vector<Scalar> pool_;
  std::vector<MacroEdge> edges_;
};

// Turns one macro edge into genuine steps starting from `from` (whose
// accessible canonical form the edge was enumerated on).
inline auto realize_edge(const TermPtr& from, const MacroEdge& e,
                         const Language& lang) -> std::vector<StepRecord> {
  std::vector<StepRecord> steps;
  AcDriver d(from, lang, &steps);
  d.sort_accessible();

  auto rule_step = [&](RuleName rule, const Position& at) {
    auto sub = subterm_at(d.term(), at);
    auto res = apply_rule_root(sub, rule, lang);
    if (!res)
      throw Error("internal: edge realization failed for " +
                  rule_name_str(rule) + " at " + position_str(at));
    steps.push_back(
        StepRecord{rule, at, false, replace_at(d.term(), at, *res)});
  };
  auto rev_step = [&](RuleName rule, const Position& at, const TermPtr& sub) {
    auto whole = replace_at(d.term(), at, sub);
    StepRecord rec{rule, at, true, whole};
    apply_step(d.term(), rec, lang);  // validates the inversion
    steps.push_back(std::move(rec));
  };

  switch (e.kind) {
    case MacroEdge::Kind::Plain: rule_step(e.rule, e.pos); break;
    case MacroEdge::Kind::RevPlain: rev_step(e.rule, e.pos, e.rev_sub); break;
    case MacroEdge::Kind::Merge:
    case MacroEdge::Kind::RevPair: {
      std::size_t k = d.spine_length(e.pos);
      std::vector<std::size_t> order{e.i, e.j};
      for (std::size_t q = 0; q < k; ++q)
        if (q != e.i && q != e.j) order.push_back(q);
      d.permute(e.pos, order);
      Position at = e.pos;
      if (k > 2) {
        d.apply(RuleName::Asso_L, e.pos);
        at.push_back(0);
      }
      if (e.kind == MacroEdge::Kind::Merge)
        rule_step(e.rule, at);
      else
        rev_step(e.rule, at, e.rev_sub);
      break;
    }
    case MacroEdge::Kind::DropZero: {
      std::size_t k = d.spine_length(e.pos);
      std::vector<std::size_t> order{e.i};
      for (std::size_t q = 0; q < k; ++q)
        if (q != e.i) order.push_back(q);
      d.permute(e.pos, order);
      rule_step(RuleName::S_zero_sum, e.pos);
      break;
    }
    case MacroEdge::Kind::SplitFun:
    case MacroEdge::Kind::SplitArg:
    case MacroEdge::Kind::SplitSmul: {
      Position spine_pos = e.pos;
      spine_pos.push_back(e.kind == MacroEdge::Kind::SplitArg ? 1 : 0);
      std::size_t k = d.spine_length(spine_pos);
      std::vector<std::size_t> order;
      for (std::size_t q = 0; q < k; ++q)
        if ((e.mask >> q) & 1u) order.push_back(q);
      std::size_t xs = order.size();
      for (std::size_t q = 0; q < k; ++q)
        if (!((e.mask >> q) & 1u)) order.push_back(q);
      d.permute(spine_pos, order);
      d.group_prefix(spine_pos, xs);
      rule_step(e.rule, e.pos);
      break;
    }
  }
  if (steps.empty() || !alpha_equal(steps.back().result, e.child))
    throw Error("internal: edge realization does not reproduce the child");
  return steps;
}

struct SearchNode {
  TermPtr term;
  TermPtr canon;
  long parent;
  MacroEdge edge;  // edge from parent (unset for roots)
};

inline auto reconstruct(const std::vector<SearchNode>& nodes, long leaf,
                        const Language& lang) -> ReductionTrace {
  std::vector<long> chain;
  for (long i = leaf; i >= 0; i = nodes[i].parent) chain.push_back(i);
  ReductionTrace trace{nodes[chain.back()].term, {}};
  for (std::size_t q = chain.size() - 1; q-- > 0;) {
    long idx = chain[q];
    auto from = nodes[nodes[idx].parent].term;
    auto steps = realize_edge(from, nodes[idx].edge, lang);
    trace.steps.insert(trace.steps.end(), steps.begin(), steps.end());
  }
  return trace;
}

}  // namespace detail

struct SearchOptions {
  bool include_beta = true;
  detail::AdmitFn admit;  // fragment predicate on every frontier state
};

namespace detail {

// Breadth-first search over AC-canonicalized states, stopping at the first
// term satisfying `goal`; `fuel` bounds the number of node expansions.
inline auto search_goal(const TermPtr& src, const Language& lang,
                        std::size_t fuel, const SearchOptions& opt,
                        const std::function<bool(const TermPtr&)>& goal)
    -> std::optional<ReductionTrace> {
  if (goal(src)) return ReductionTrace{src, {}};

  std::vector<SearchNode> nodes;
  nodes.push_back({src, canon_accessible(src, lang), -1, {}});
  std::unordered_set<std::string> seen{nameless_key(nodes[0].canon)};
  std::deque<long> queue{0};
  EdgeOptions eopt{opt.include_beta, opt.admit};

  for (std::size_t spent = 0; !queue.empty() && spent < fuel; ++spent) {
    long idx = queue.front();
    queue.pop_front();
    auto edges = EdgeEnumerator(nodes[idx].canon, lang, eopt).run();
    for (auto& e : edges) {
      auto canon = canon_accessible(e.child, lang);
      auto key = nameless_key(canon);
      if (!seen.insert(key).second) continue;
      nodes.push_back({e.child, canon, idx, e});
      if (goal(e.child))
        return reconstruct(nodes, static_cast<long>(nodes.size()) - 1, lang);
      queue.push_back(static_cast<long>(nodes.size()) - 1);
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Finds a trace from src to a term AC-equal to dst within `fuel` expansions.
// Absence (std::nullopt) means the bounded search found nothing, not a proof
// of unreachability.
inline auto reduces_to(const TermPtr& src, const TermPtr& dst,
                       const Language& lang, std::size_t fuel,
                       const SearchOptions& opt = {})
    -> std::optional<ReductionTrace> {
  const std::string goal = detail::class_key(dst);
  return detail::search_goal(src, lang, fuel, opt, [&](const TermPtr& t) {
    return detail::class_key(t) == goal;
  });
}

struct JoinResult {
  bool joined = false;
  TermPtr meet;
  std::optional<ReductionTrace> left_trace;
  std::optional<ReductionTrace> right_trace;
  std::size_t depth_used = 0;
};

// Bidirectional oriented search; frontiers are AC-canonicalized and meet
// detection is modulo full AC equality.
inline auto joinable(const TermPtr& a, const TermPtr& b, const Language& lang,
                     std::size_t depth, const SearchOptions& opt = {})
    -> JoinResult {
  if (ac_equal(a, b)) {
    return JoinResult{true, a, ReductionTrace{a, {}}, ReductionTrace{b, {}}, 0};
  }
  struct Side {
    std::vector<detail::SearchNode> nodes;
    std::unordered_set<std::string> seen;
    std::unordered_map<std::string, long> by_class;
    std::vector<long> frontier;
  };
  Side sides[2];
  const TermPtr* roots[2] = {&a, &b};
  for (int s = 0; s < 2; ++s) {
    auto canon = detail::canon_accessible(*roots[s], lang);
    sides[s].nodes.push_back({*roots[s], canon, -1, {}});
    sides[s].seen.insert(detail::nameless_key(canon));
    sides[s].by_class.emplace(detail::class_key(*roots[s]), 0);
    sides[s].frontier.push_back(0);
  }
  detail::EdgeOptions eopt{opt.include_beta, opt.admit};

  auto finish = [&](int s, long own, long other) -> JoinResult {
    JoinResult r;
    r.joined = true;
    auto left = detail::reconstruct(sides[s].nodes, own, lang);
    auto right = detail::reconstruct(sides[1 - s].nodes, other, lang);
    r.meet = left.end();
    if (s == 0) {
      r.left_trace = std::move(left);
      r.right_trace = std::move(right);
    } else {
      r.left_trace = std::move(right);
      r.right_trace = std::move(left);
    }
    return r;
  };

  std::size_t explored = 0;
  for (std::size_t level = 1; level <= depth; ++level) {
    if (sides[0].frontier.empty() && sides[1].frontier.empty()) break;
    explored = level;
    for (int s = 0; s < 2; ++s) {
      Side& side = sides[s];
      Side& othr = sides[1 - s];
      std::vector<long> next;
      for (long idx : side.frontier) {
        auto edges =
            detail::EdgeEnumerator(side.nodes[idx].canon, lang, eopt).run();
        for (auto& e : edges) {
          auto canon = detail::canon_accessible(e.child, lang);
          auto key = detail::nameless_key(canon);
          if (!side.seen.insert(key).second) continue;
          side.nodes.push_back({e.child, canon, idx, e});
          long ni = static_cast<long>(side.nodes.size()) - 1;
          auto ck = detail::class_key(e.child);
          side.by_class.emplace(ck, ni);
          if (auto it = othr.by_class.find(ck); it != othr.by_class.end()) {
            auto r = finish(s, ni, it->second);
            r.depth_used = level;
            return r;
          }
          next.push_back(ni);
        }
      }
      side.frontier = std::move(next);
    }
  }
  JoinResult r;
  r.depth_used = explored;
  return r;
}

}  // namespace alam
