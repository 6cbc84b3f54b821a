#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "alam/fragments.hpp"
#include "alam/search.hpp"

namespace alam {

inline constexpr std::size_t kDefaultJoinDepth = 8;
inline constexpr std::size_t kDefaultSearchFuel = 500;

struct PeakFailure {
  StepRecord left;
  StepRecord right;
};

// Checks every unordered pair of one-step reducts of t for joinability within
// `depth`. With algebraic_only, beta steps are excluded from both the peak and
// the joining searches (the purely algebraic subsystems).
inline auto local_confluence_check(const TermPtr& t, const Language& lang,
                                   std::size_t depth = kDefaultJoinDepth,
                                   bool algebraic_only = false)
    -> std::vector<PeakFailure> {
  auto steps = step_all(t, lang);
  if (algebraic_only)
    steps.erase(std::remove_if(steps.begin(), steps.end(),
                               [](const StepRecord& s) {
                                 return is_beta_rule(s.rule);
                               }),
                steps.end());
  // AC-equal reducts join in zero steps; one representative per class is
  // enough.
  std::vector<StepRecord> reps;
  std::unordered_set<std::string> seen;
  for (auto& s : steps)
    if (seen.insert(detail::class_key(s.result)).second) reps.push_back(s);

  std::vector<PeakFailure> failures;
  SearchOptions opt;
  opt.include_beta = !algebraic_only;
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      auto r = joinable(reps[i].result, reps[j].result, lang, depth, opt);
      if (!r.joined) failures.push_back(PeakFailure{reps[i], reps[j]});
    }
  return failures;
}

// (\x. m + (x) x) \x. m + (x) x with x fresh for m: a fixed point of
// M |-> m + M up to one beta step.
inline auto build_Y(const TermPtr& m) -> TermPtr {
  auto avoid = all_names(m);
  auto x = fresh_name("x", avoid);
  auto body = Term::sum(m, Term::app(Term::var(x), Term::var(x)));
  auto w = Term::lam(x, body);
  return Term::app(w, w);
}

// Oriented divergence witness: Y_m - Y_m reduces both to 0 (cancelling the two
// copies) and to something AC-equal to m (unfolding one copy first). Both
// traces are found by bounded search and validate under replay.
inline auto demonstrate_nonconfluence(const TermPtr& m, const Language& lang,
                                      std::size_t fuel = kDefaultSearchFuel)
    -> std::pair<ReductionTrace, ReductionTrace> {
  if (is_symmetric(lang))
    throw Error("nonconfluence demonstration needs an oriented language");
  auto y = build_Y(m);
  auto start = Term::sum(y, Term::smul(Scalar(Rational(-1)), y));
  auto to_zero = reduces_to(start, Term::zero(), lang, fuel);
  if (!to_zero) throw FuelExhausted(ReductionTrace{start, {}});
  auto to_m = reduces_to(start, m, lang, fuel);
  if (!to_m) throw FuelExhausted(ReductionTrace{start, {}});
  return {std::move(*to_zero), std::move(*to_m)};
}

// Derives m = n in the symmetric call-by-value language by adding and
// cancelling Y_{n-m}. Every intermediate must satisfy the fragment; if one is
// rejected (e.g. the -1 coefficient under a non-negative fragment) the result
// is absent.
inline auto demonstrate_trivial_equality(const TermPtr& m, const TermPtr& n,
                                         const Fragment& fragment,
                                         std::size_t fuel = kDefaultSearchFuel)
    -> std::optional<ReductionTrace> {
  const Language lang = kLinEq;
  if (!fragment.ok(m) || !fragment.ok(n)) return std::nullopt;
  if (alpha_equal(m, n)) return ReductionTrace{m, {}};

  const Scalar minus1{Rational(-1)};
  auto diff = Term::sum(n, Term::smul(minus1, m));
  auto y = build_Y(diff);

  ReductionTrace trace{m, {}};
  auto cur = m;
  bool admitted = true;
  auto push = [&](RuleName rule, Position pos, bool reversed, TermPtr result) {
    StepRecord rec{rule, std::move(pos), reversed, std::move(result)};
    cur = apply_step(cur, rec, lang);  // validates forward + reversed steps
    if (!fragment.ok(cur)) admitted = false;
    trace.steps.push_back(std::move(rec));
  };

  auto my = Term::smul(minus1, y);
  // m = 0 + m = 0.Y + m = (-1.Y + Y) + m
  push(RuleName::S_zero_sum, {}, true, Term::sum(Term::zero(), m));
  push(RuleName::S_zero_coeff, {0}, true,
       Term::sum(Term::smul(Scalar(0), y), m));
  push(RuleName::F_fact1, {0}, true, Term::sum(Term::sum(my, y), m));
  // Unfold one copy: Y -> (n + -1.m) + Y
  auto unfolded = Term::sum(diff, y);
  push(RuleName::BetaV, {0, 1}, false,
       Term::sum(Term::sum(my, unfolded), m));
  // Regroup, cancel the Y pair, then the m pair.
  push(RuleName::Com, {0, 1}, false,
       Term::sum(Term::sum(my, Term::sum(y, diff)), m));
  push(RuleName::Asso_L, {0}, false,
       Term::sum(Term::sum(Term::sum(my, y), diff), m));
  push(RuleName::F_fact1, {0, 0}, false,
       Term::sum(Term::sum(Term::smul(Scalar(0), y), diff), m));
  push(RuleName::S_zero_coeff, {0, 0}, false,
       Term::sum(Term::sum(Term::zero(), diff), m));
  push(RuleName::S_zero_sum, {0}, false, Term::sum(diff, m));
  push(RuleName::Asso_R, {}, false,
       Term::sum(n, Term::sum(Term::smul(minus1, m), m)));
  push(RuleName::F_fact1, {1}, false,
       Term::sum(n, Term::smul(Scalar(0), m)));
  push(RuleName::S_zero_coeff, {1}, false, Term::sum(n, Term::zero()));
  push(RuleName::Com, {}, false, Term::sum(Term::zero(), n));
  push(RuleName::S_zero_sum, {}, false, n);

  if (!alpha_equal(trace.end(), n))
    throw Error("internal: equality derivation does not end at the target");
  if (trace.steps.size() > fuel) throw FuelExhausted(std::move(trace));
  if (!admitted) return std::nullopt;
  return trace;
}

// One checked instance of the standardization property: a term symmetrically
// equal to a value should reduce to an algebraically equal value by oriented
// steps alone. The check never claims a refutation; a miss is reported as
// evidence against the *hypotheses* (fuel, fragment choice).
struct EqToRedReport {
  bool ok = false;
  bool value_found = false;           // symmetric search reached a value
  TermPtr value;                      // V
  std::optional<ReductionTrace> symmetric_trace;
  bool oriented_value_found = false;  // oriented search reached a value
  TermPtr oriented_value;             // V'
  std::optional<ReductionTrace> oriented_trace;
  bool values_related = false;        // V = V' by fragment algebraic equality
  std::optional<ReductionTrace> relation_trace;
  std::string note;
};

inline auto check_eq_to_red(const TermPtr& m, const Language& lang,
                            const Fragment& fragment,
                            std::size_t fuel = kDefaultSearchFuel)
    -> EqToRedReport {
  const Language sym{lang.beta, AlgStyle::Symmetric};
  const Language ori{lang.beta, AlgStyle::Oriented};
  SearchOptions opt;
  opt.admit = [&fragment](const TermPtr& t) { return fragment.ok(t); };

  EqToRedReport rep;
  if (!fragment.ok(m)) {
    rep.note = "input term is outside the fragment; the fragment-relative "
               "relation has no steps from it";
    return rep;
  }
  auto is_val = [](const TermPtr& t) { return is_value(t); };
  auto sym_trace = detail::search_goal(m, sym, fuel, opt, is_val);
  if (!sym_trace) {
    rep.note = "no value reachable by symmetric search within fuel";
    return rep;
  }
  rep.value_found = true;
  rep.value = sym_trace->end();
  rep.symmetric_trace = std::move(*sym_trace);

  auto ori_trace = detail::search_goal(m, ori, fuel, opt, is_val);
  if (!ori_trace) {
    rep.note =
        "symmetric search reached a value but oriented search did not; "
        "within the given fuel this instance violates the hypothesis";
    return rep;
  }
  rep.oriented_value_found = true;
  rep.oriented_value = ori_trace->end();
  rep.oriented_trace = std::move(*ori_trace);

  SearchOptions alg = opt;
  alg.include_beta = false;
  auto relation = reduces_to(rep.value, rep.oriented_value, sym, fuel, alg);
  if (!relation) {
    rep.note =
        "both searches reached values, but no fragment-relative algebraic "
        "equality between them was found within fuel";
    return rep;
  }
  rep.values_related = true;
  rep.relation_trace = std::move(*relation);
  rep.ok = true;
  rep.note = "value reached symmetrically and by oriented steps; endpoints "
             "algebraically equal";
  return rep;
}

}  // namespace alam
