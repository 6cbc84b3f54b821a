#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "alam/term.hpp"

namespace alam {

// One tag per rule of the rewrite system: the two betas, the call-by-name
// application group A, the call-by-value groups A_l/A_r, associativity and
// commutativity, factorization F, and simplification S.
enum class RuleName {
  BetaN,
  BetaV,
  A_app_sum,
  A_app_smul,
  A_app_zero,
  Al_sum,
  Al_smul,
  Al_zero,
  Ar_sum,
  Ar_smul,
  Ar_zero,
  Asso_L,
  Asso_R,
  Com,
  F_fact,
  F_fact1,
  F_fact11,
  F_smul_smul,
  S_dist,
  S_one,
  S_zero_coeff,
  S_zero_term,
  S_zero_sum,
};

inline constexpr int kRuleCount = 23;

inline auto rule_name_str(RuleName r) -> std::string {
  switch (r) {
    case RuleName::BetaN: return "BetaN";
    case RuleName::BetaV: return "BetaV";
    case RuleName::A_app_sum: return "A_app_sum";
    case RuleName::A_app_smul: return "A_app_smul";
    case RuleName::A_app_zero: return "A_app_zero";
    case RuleName::Al_sum: return "Al_sum";
    case RuleName::Al_smul: return "Al_smul";
    case RuleName::Al_zero: return "Al_zero";
    case RuleName::Ar_sum: return "Ar_sum";
    case RuleName::Ar_smul: return "Ar_smul";
    case RuleName::Ar_zero: return "Ar_zero";
    case RuleName::Asso_L: return "Asso_L";
    case RuleName::Asso_R: return "Asso_R";
    case RuleName::Com: return "Com";
    case RuleName::F_fact: return "F_fact";
    case RuleName::F_fact1: return "F_fact1";
    case RuleName::F_fact11: return "F_fact11";
    case RuleName::F_smul_smul: return "F_smul_smul";
    case RuleName::S_dist: return "S_dist";
    case RuleName::S_one: return "S_one";
    case RuleName::S_zero_coeff: return "S_zero_coeff";
    case RuleName::S_zero_term: return "S_zero_term";
    case RuleName::S_zero_sum: return "S_zero_sum";
  }
  return "?";
}

inline auto parse_rule_name(const std::string& s) -> std::optional<RuleName> {
  for (int i = 0; i < kRuleCount; ++i) {
    auto r = static_cast<RuleName>(i);
    if (rule_name_str(r) == s) return r;
  }
  return std::nullopt;
}

inline auto is_beta_rule(RuleName r) -> bool {
  return r == RuleName::BetaN || r == RuleName::BetaV;
}

inline auto is_ac_rule(RuleName r) -> bool {
  return r == RuleName::Asso_L || r == RuleName::Asso_R || r == RuleName::Com;
}

enum class BetaStyle { CallByName, CallByValue };
enum class AlgStyle { Oriented, Symmetric };

// One of the four languages: beta discipline x whether the algebraic rules are
// oriented or used as a symmetric (two-way) relation. Beta is never reversed.
struct Language {
  BetaStyle beta;
  AlgStyle algebraic;

  friend auto operator==(const Language& a, const Language& b) -> bool {
    return a.beta == b.beta && a.algebraic == b.algebraic;
  }
};

inline constexpr Language kLinRed{BetaStyle::CallByValue, AlgStyle::Oriented};
inline constexpr Language kLinEq{BetaStyle::CallByValue, AlgStyle::Symmetric};
inline constexpr Language kAlgRed{BetaStyle::CallByName, AlgStyle::Oriented};
inline constexpr Language kAlgEq{BetaStyle::CallByName, AlgStyle::Symmetric};

inline auto is_cbv(const Language& lang) -> bool {
  return lang.beta == BetaStyle::CallByValue;
}
inline auto is_symmetric(const Language& lang) -> bool {
  return lang.algebraic == AlgStyle::Symmetric;
}

inline auto language_str(const Language& lang) -> std::string {
  if (is_cbv(lang)) return is_symmetric(lang) ? "lin-eq" : "lin-red";
  return is_symmetric(lang) ? "alg-eq" : "alg-red";
}

inline auto parse_language(const std::string& s) -> std::optional<Language> {
  if (s == "lin-red") return kLinRed;
  if (s == "lin-eq") return kLinEq;
  if (s == "alg-red") return kAlgRed;
  if (s == "alg-eq") return kAlgEq;
  return std::nullopt;
}

struct StepRecord {
  RuleName rule;
  Position position;
  bool reversed = false;
  TermPtr result;               // whole term after the step
  int alternatives = -1;        // Exhaustive strategy only
};

struct ReductionTrace {
  TermPtr start;
  std::vector<StepRecord> steps;

  auto end() const -> const TermPtr& {
    return steps.empty() ? start : steps.back().result;
  }
};

struct FuelExhausted : Error {
  explicit FuelExhausted(ReductionTrace partial_trace)
      : Error("fuel exhausted after " +
              std::to_string(partial_trace.steps.size()) + " steps"),
        partial(std::move(partial_trace)) {}
  ReductionTrace partial;
};

// Applies `rule` at the root of t if its pattern and the language's side
// conditions match. Deterministic: each rule has at most one result per term.
inline auto apply_rule_root(const TermPtr& t, RuleName rule, const Language& lang)
    -> std::optional<TermPtr> {
  const bool cbv = is_cbv(lang);
  switch (rule) {
    case RuleName::BetaN: {
      if (cbv || t->tag() != Tag::App) return std::nullopt;
      const auto& f = t->child0();
      if (f->tag() != Tag::Lam) return std::nullopt;
      return substitute(f->child0(), f->name(), t->child1());
    }
    case RuleName::BetaV: {
      if (!cbv || t->tag() != Tag::App) return std::nullopt;
      const auto& f = t->child0();
      if (f->tag() != Tag::Lam || !is_base(t->child1())) return std::nullopt;
      return substitute(f->child0(), f->name(), t->child1());
    }
    case RuleName::A_app_sum:
    case RuleName::A_app_smul:
    case RuleName::A_app_zero: {
      if (cbv || t->tag() != Tag::App) return std::nullopt;
      const auto& f = t->child0();
      const auto& a = t->child1();
      if (rule == RuleName::A_app_sum && f->tag() == Tag::Sum)
        return Term::sum(Term::app(f->child0(), a), Term::app(f->child1(), a));
      if (rule == RuleName::A_app_smul && f->tag() == Tag::Smul)
        return Term::smul(f->coeff(), Term::app(f->child0(), a));
      if (rule == RuleName::A_app_zero && f->tag() == Tag::Zero)
        return Term::zero();
      return std::nullopt;
    }
    case RuleName::Al_sum:
    case RuleName::Al_smul:
    case RuleName::Al_zero: {
      if (!cbv || t->tag() != Tag::App) return std::nullopt;
      const auto& f = t->child0();
      const auto& a = t->child1();
      if (!is_value(a)) return std::nullopt;
      if (rule == RuleName::Al_sum && f->tag() == Tag::Sum)
        return Term::sum(Term::app(f->child0(), a), Term::app(f->child1(), a));
      if (rule == RuleName::Al_smul && f->tag() == Tag::Smul)
        return Term::smul(f->coeff(), Term::app(f->child0(), a));
      if (rule == RuleName::Al_zero && f->tag() == Tag::Zero)
        return Term::zero();
      return std::nullopt;
    }
    case RuleName::Ar_sum:
    case RuleName::Ar_smul:
    case RuleName::Ar_zero: {
      if (!cbv || t->tag() != Tag::App) return std::nullopt;
      const auto& f = t->child0();
      const auto& a = t->child1();
      if (!is_base(f)) return std::nullopt;
      if (rule == RuleName::Ar_sum && a->tag() == Tag::Sum)
        return Term::sum(Term::app(f, a->child0()), Term::app(f, a->child1()));
      if (rule == RuleName::Ar_smul && a->tag() == Tag::Smul)
        return Term::smul(a->coeff(), Term::app(f, a->child0()));
      if (rule == RuleName::Ar_zero && a->tag() == Tag::Zero)
        return Term::zero();
      return std::nullopt;
    }
    case RuleName::Asso_L: {
      if (t->tag() != Tag::Sum || t->child1()->tag() != Tag::Sum)
        return std::nullopt;
      const auto& r = t->child1();
      return Term::sum(Term::sum(t->child0(), r->child0()), r->child1());
    }
    case RuleName::Asso_R: {
      if (t->tag() != Tag::Sum || t->child0()->tag() != Tag::Sum)
        return std::nullopt;
      const auto& l = t->child0();
      return Term::sum(l->child0(), Term::sum(l->child1(), t->child1()));
    }
    case RuleName::Com: {
      if (t->tag() != Tag::Sum) return std::nullopt;
      return Term::sum(t->child1(), t->child0());
    }
    case RuleName::F_fact: {
      if (t->tag() != Tag::Sum) return std::nullopt;
      const auto& l = t->child0();
      const auto& r = t->child1();
      if (l->tag() != Tag::Smul || r->tag() != Tag::Smul) return std::nullopt;
      if (!alpha_equal(l->child0(), r->child0())) return std::nullopt;
      return Term::smul(l->coeff() + r->coeff(), l->child0());
    }
    case RuleName::F_fact1: {
      if (t->tag() != Tag::Sum || t->child0()->tag() != Tag::Smul)
        return std::nullopt;
      const auto& l = t->child0();
      if (!alpha_equal(l->child0(), t->child1())) return std::nullopt;
      return Term::smul(l->coeff() + Scalar(1), l->child0());
    }
    case RuleName::F_fact11: {
      if (t->tag() != Tag::Sum || !alpha_equal(t->child0(), t->child1()))
        return std::nullopt;
      return Term::smul(Scalar(2), t->child0());
    }
    case RuleName::F_smul_smul: {
      if (t->tag() != Tag::Smul || t->child0()->tag() != Tag::Smul)
        return std::nullopt;
      const auto& b = t->child0();
      return Term::smul(t->coeff() * b->coeff(), b->child0());
    }
    case RuleName::S_dist: {
      if (t->tag() != Tag::Smul || t->child0()->tag() != Tag::Sum)
        return std::nullopt;
      const auto& b = t->child0();
      return Term::sum(Term::smul(t->coeff(), b->child0()),
                       Term::smul(t->coeff(), b->child1()));
    }
    case RuleName::S_one: {
      if (t->tag() != Tag::Smul || !t->coeff().is_one()) return std::nullopt;
      return t->child0();
    }
    case RuleName::S_zero_coeff: {
      if (t->tag() != Tag::Smul || !t->coeff().is_zero()) return std::nullopt;
      return Term::zero();
    }
    case RuleName::S_zero_term: {
      if (t->tag() != Tag::Smul || t->child0()->tag() != Tag::Zero)
        return std::nullopt;
      return Term::zero();
    }
    case RuleName::S_zero_sum: {
      if (t->tag() != Tag::Sum || t->child0()->tag() != Tag::Zero)
        return std::nullopt;
      return t->child1();
    }
  }
  return std::nullopt;
}

namespace detail {

// Finite coefficient pool for reverse F/S steps: scalars present in the term
// and 0, 1, closed one level under negation and pairwise sums.
inline auto reverse_scalar_candidates(const TermPtr& root) -> std::vector<Scalar> {
  std::set<Rational> base;
  collect_scalars(root, base);
  base.insert(Rational(0));
  base.insert(Rational(1));
  std::set<Rational> out = base;
  for (const auto& a : base) out.insert(-a);
  for (const auto& a : base)
    for (const auto& b : base) {
      out.insert(a + b);
      out.insert(-(a + b));
    }
  std::vector<Scalar> v;
  v.reserve(out.size());
  for (const auto& r : out) v.push_back(Scalar(r));
  return v;
}

// Reversed algebraic rules whose left side can be rebuilt from t alone.
// Reverses that would invent an arbitrary subterm ((0) V <- 0, a.0 aside,
// 0.M <- 0) are not enumerated; Asso/Com reverses are already forward rules.
inline void reversed_rules_root(const TermPtr& t, const Language& lang,
                                const std::vector<Scalar>& pool,
                                std::vector<std::pair<RuleName, TermPtr>>& out) {
  const bool cbv = is_cbv(lang);
  // Reverse application linearity. (M+N) L <- (M) L + (N) L etc.
  if (t->tag() == Tag::Sum) {
    const auto& l = t->child0();
    const auto& r = t->child1();
    if (l->tag() == Tag::App && r->tag() == Tag::App) {
      if (alpha_equal(l->child1(), r->child1())) {
        bool ok = cbv ? is_value(l->child1()) : true;
        if (ok)
          out.emplace_back(cbv ? RuleName::Al_sum : RuleName::A_app_sum,
                           Term::app(Term::sum(l->child0(), r->child0()),
                                     l->child1()));
      }
      if (cbv && is_base(l->child0()) && alpha_equal(l->child0(), r->child0()))
        out.emplace_back(RuleName::Ar_sum,
                         Term::app(l->child0(),
                                   Term::sum(l->child1(), r->child1())));
    }
    // a.M + M <- (a+1).M has a unique decomposition; handled under Smul.
    if (l->tag() == Tag::Smul && r->tag() == Tag::Smul &&
        l->coeff() == r->coeff())
      out.emplace_back(RuleName::S_dist,
                       Term::smul(l->coeff(),
                                  Term::sum(l->child0(), r->child0())));
  }
  if (t->tag() == Tag::Smul) {
    const auto& body = t->child0();
    if (body->tag() == Tag::App) {
      bool ok = cbv ? is_value(body->child1()) : true;
      if (ok)
        out.emplace_back(cbv ? RuleName::Al_smul : RuleName::A_app_smul,
                         Term::app(Term::smul(t->coeff(), body->child0()),
                                   body->child1()));
      if (cbv && is_base(body->child0()))
        out.emplace_back(RuleName::Ar_smul,
                         Term::app(body->child0(),
                                   Term::smul(t->coeff(), body->child1())));
    }
    // (a+b).M <- a.M + b.M over the finite pool.
    for (const auto& a : pool)
      out.emplace_back(RuleName::F_fact,
                       Term::sum(Term::smul(a, body),
                                 Term::smul(t->coeff() - a, body)));
    out.emplace_back(RuleName::F_fact1,
                     Term::sum(Term::smul(t->coeff() - Scalar(1), body), body));
    if (t->coeff() == Scalar(2))
      out.emplace_back(RuleName::F_fact11, Term::sum(body, body));
    for (const auto& a : pool) {
      if (a.is_zero()) continue;
      out.emplace_back(RuleName::F_smul_smul,
                       Term::smul(a, Term::smul(t->coeff() / a, body)));
    }
  }
  if (t->tag() == Tag::Zero) {
    for (const auto& a : pool)
      out.emplace_back(RuleName::S_zero_term, Term::smul(a, Term::zero()));
  }
  out.emplace_back(RuleName::S_one, Term::smul(Scalar(1), t));
  out.emplace_back(RuleName::S_zero_sum, Term::sum(Term::zero(), t));
}

using AdmitFn = std::function<bool(const TermPtr&)>;

inline void step_all_walk(const TermPtr& root, const TermPtr& cur, Position& pos,
                          const Language& lang, const std::vector<Scalar>& pool,
                          const AdmitFn& admit, std::vector<StepRecord>& out) {
  for (int i = 0; i < kRuleCount; ++i) {
    auto rule = static_cast<RuleName>(i);
    if (auto res = apply_rule_root(cur, rule, lang)) {
      auto whole = replace_at(root, pos, *res);
      if (!admit || admit(whole))
        out.push_back(StepRecord{rule, pos, false, std::move(whole)});
    }
  }
  if (is_symmetric(lang)) {
    std::vector<std::pair<RuleName, TermPtr>> rev;
    reversed_rules_root(cur, lang, pool, rev);
    for (auto& [rule, res] : rev) {
      auto whole = replace_at(root, pos, res);
      if (!admit || admit(whole))
        out.push_back(StepRecord{rule, pos, true, std::move(whole)});
    }
  }
  switch (cur->tag()) {
    case Tag::App:
      pos.push_back(0);
      step_all_walk(root, cur->child0(), pos, lang, pool, admit, out);
      pos.back() = 1;
      // The argument is a reducible position only in call-by-value, and only
      // under a value function (xi_lambda-lin).
      if (is_cbv(lang) && is_value(cur->child0()))
        step_all_walk(root, cur->child1(), pos, lang, pool, admit, out);
      pos.pop_back();
      return;
    case Tag::Sum:
      pos.push_back(0);
      step_all_walk(root, cur->child0(), pos, lang, pool, admit, out);
      pos.back() = 1;
      step_all_walk(root, cur->child1(), pos, lang, pool, admit, out);
      pos.pop_back();
      return;
    case Tag::Smul:
      pos.push_back(0);
      step_all_walk(root, cur->child0(), pos, lang, pool, admit, out);
      pos.pop_back();
      return;
    default: return;  // Zero, Var; Lam bodies are never reduced
  }
}

}  // namespace detail

// Every one-step reduct of t in lang, ordered by (position, rule, reversed).
// `admit` filters results (fragment predicate); the input itself is assumed
// admitted by the caller.
inline auto step_all(const TermPtr& t, const Language& lang,
                     const detail::AdmitFn& admit = {}) -> std::vector<StepRecord> {
  std::vector<StepRecord> out;
  std::vector<Scalar> pool;
  if (is_symmetric(lang)) pool = detail::reverse_scalar_candidates(t);
  Position pos;
  detail::step_all_walk(t, t, pos, lang, pool, admit, out);
  std::stable_sort(out.begin(), out.end(),
                   [](const StepRecord& a, const StepRecord& b) {
                     if (a.position != b.position)
                       return std::lexicographical_compare(
                           a.position.begin(), a.position.end(),
                           b.position.begin(), b.position.end());
                     if (a.rule != b.rule) return a.rule < b.rule;
                     return a.reversed < b.reversed;
                   });
  return out;
}

// Validates and applies one recorded step: forward steps are recomputed, and a
// reversed step must map back to the original by its forward rule.
inline auto apply_step(const TermPtr& t, const StepRecord& step,
                       const Language& lang) -> TermPtr {
  auto sub = subterm_at(t, step.position);
  if (!step.reversed) {
    auto res = apply_rule_root(sub, step.rule, lang);
    if (!res)
      throw Error("replay: rule " + rule_name_str(step.rule) +
                  " does not apply at " + position_str(step.position));
    auto whole = replace_at(t, step.position, *res);
    if (!alpha_equal(whole, step.result))
      throw Error("replay: recorded result mismatch at " +
                  position_str(step.position));
    return step.result;
  }
  if (is_beta_rule(step.rule) || is_ac_rule(step.rule))
    throw Error("replay: rule " + rule_name_str(step.rule) +
                " cannot be reversed");
  if (!is_symmetric(lang))
    throw Error("replay: reversed step in an oriented language");
  auto rev_sub = subterm_at(step.result, step.position);
  auto back = apply_rule_root(rev_sub, step.rule, lang);
  if (!back || !alpha_equal(*back, sub))
    throw Error("replay: reversed step does not invert rule " +
                rule_name_str(step.rule) + " at " +
                position_str(step.position));
  if (!alpha_equal(replace_at(t, step.position, rev_sub), step.result))
    throw Error("replay: reversed step rewrites outside its position");
  return step.result;
}

// Replays a trace from its start, validating every step.
inline auto replay(const ReductionTrace& trace, const Language& lang) -> TermPtr {
  auto cur = trace.start;
  for (const auto& step : trace.steps) cur = apply_step(cur, step, lang);
  return cur;
}

enum class Strategy { LeftmostOutermost, Exhaustive };

inline auto parse_strategy(const std::string& s) -> std::optional<Strategy> {
  if (s == "leftmost-outermost" || s == "lmo") return Strategy::LeftmostOutermost;
  if (s == "exhaustive") return Strategy::Exhaustive;
  return std::nullopt;
}

// Deterministic bounded reduction. Strategies pick among forward steps only:
// LeftmostOutermost also drops Asso/Com (they never change the AC class, and
// keeping them would livelock); Exhaustive keeps them and records how many
// candidates each step had.
inline auto reduce(const TermPtr& t, const Language& lang, Strategy strategy,
                   std::size_t fuel) -> ReductionTrace {
  ReductionTrace trace{t, {}};
  auto cur = t;
  for (;;) {
    auto steps = step_all(cur, lang);
    std::erase_if(steps, [&](const StepRecord& s) {
      if (s.reversed) return true;
      return strategy == Strategy::LeftmostOutermost && is_ac_rule(s.rule);
    });
    if (steps.empty()) return trace;
    if (trace.steps.size() == fuel) throw FuelExhausted(std::move(trace));
    StepRecord pick = steps.front();  // step_all is (position, rule)-sorted
    if (strategy == Strategy::Exhaustive)
      pick.alternatives = static_cast<int>(steps.size());
    cur = pick.result;
    trace.steps.push_back(std::move(pick));
  }
}

}  // namespace alam
