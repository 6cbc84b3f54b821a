#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "alam/fragments.hpp"
#include "alam/search.hpp"

namespace alam {

enum class Direction { CbvToCbn, CbnToCbv };

inline auto direction_str(Direction d) -> std::string {
  return d == Direction::CbvToCbn ? "cbv2cbn" : "cbn2cbv";
}

inline auto parse_direction(const std::string& s) -> std::optional<Direction> {
  if (s == "cbv2cbn") return Direction::CbvToCbn;
  if (s == "cbn2cbv") return Direction::CbnToCbv;
  return std::nullopt;
}

struct NotAValue : Error {
  explicit NotAValue(const std::string& what) : Error(what) {}
};
struct NotClosed : Error {
  explicit NotClosed(const std::string& what) : Error(what) {}
};
struct KNotBase : Error {
  explicit KNotBase(const std::string& what) : Error(what) {}
};
struct SourceNotTerminating : FuelExhausted {
  explicit SourceNotTerminating(ReductionTrace partial)
      : FuelExhausted(std::move(partial)) {}
};

namespace detail {

// Deterministic continuation-variable stream (f0, g0, h0, f1, ...), skipping
// names already present in the translated term.
class FreshNames {
 public:
  explicit FreshNames(const TermPtr& t) : avoid_(all_names(t)) {}
  FreshNames(const TermPtr& a, const TermPtr& b) : avoid_(all_names(a)) {
    auto more = all_names(b);
    avoid_.insert(more.begin(), more.end());
  }

  auto draw(char letter) -> std::string {
    int& i = next_[letter];
    for (;;) {
      auto name = std::string(1, letter) + std::to_string(i++);
      if (!avoid_.count(name)) return name;
    }
  }

 private:
  std::set<std::string> avoid_;
  std::map<char, int> next_;
};

inline auto wt_impl(const TermPtr& t, FreshNames& fresh) -> TermPtr {
  switch (t->tag()) {
    case Tag::Zero: return Term::zero();
    case Tag::Var: {
      auto f = fresh.draw('f');
      return Term::lam(f, Term::app(Term::var(f), t));
    }
    case Tag::Lam: {
      auto f = fresh.draw('f');
      auto inner = Term::lam(t->name(), wt_impl(t->child0(), fresh));
      return Term::lam(f, Term::app(Term::var(f), inner));
    }
    case Tag::App: {
      auto f = fresh.draw('f');
      auto g = fresh.draw('g');
      auto h = fresh.draw('h');
      auto body = Term::app(
          wt_impl(t->child0(), fresh),
          Term::lam(g, Term::app(wt_impl(t->child1(), fresh),
                                 Term::lam(h, Term::app(Term::app(Term::var(g),
                                                                  Term::var(h)),
                                                        Term::var(f))))));
      return Term::lam(f, body);
    }
    case Tag::Smul: {
      auto f = fresh.draw('f');
      return Term::lam(f, Term::app(Term::smul(t->coeff(),
                                               wt_impl(t->child0(), fresh)),
                                    Term::var(f)));
    }
    case Tag::Sum: {
      auto f = fresh.draw('f');
      return Term::lam(f, Term::app(Term::sum(wt_impl(t->child0(), fresh),
                                              wt_impl(t->child1(), fresh)),
                                    Term::var(f)));
    }
  }
  throw Error("unreachable");
}

inline auto cps_impl(const TermPtr& t, FreshNames& fresh) -> TermPtr {
  switch (t->tag()) {
    case Tag::Var: return t;
    case Tag::Zero: {
      auto f = fresh.draw('f');
      return Term::lam(f, Term::app(Term::zero(), Term::var(f)));
    }
    case Tag::Lam: {
      auto f = fresh.draw('f');
      auto inner = Term::lam(t->name(), cps_impl(t->child0(), fresh));
      return Term::lam(f, Term::app(Term::var(f), inner));
    }
    case Tag::App: {
      auto f = fresh.draw('f');
      auto g = fresh.draw('g');
      auto body = Term::app(
          cps_impl(t->child0(), fresh),
          Term::lam(g, Term::app(Term::app(Term::var(g),
                                           cps_impl(t->child1(), fresh)),
                                 Term::var(f))));
      return Term::lam(f, body);
    }
    case Tag::Smul: {
      auto f = fresh.draw('f');
      return Term::lam(f, Term::app(Term::smul(t->coeff(),
                                               cps_impl(t->child0(), fresh)),
                                    Term::var(f)));
    }
    case Tag::Sum: {
      auto f = fresh.draw('f');
      return Term::lam(f, Term::app(Term::sum(cps_impl(t->child0(), fresh),
                                              cps_impl(t->child1(), fresh)),
                                    Term::var(f)));
    }
  }
  throw Error("unreachable");
}

}  // namespace detail

// Call-by-value to call-by-name encoding.
inline auto wt(const TermPtr& t) -> TermPtr {
  detail::FreshNames fresh(t);
  return detail::wt_impl(t, fresh);
}

// Value counterpart of wt.
inline auto psi(const TermPtr& v) -> TermPtr {
  switch (v->tag()) {
    case Tag::Zero:
    case Tag::Var: return v;
    case Tag::Lam: return Term::lam(v->name(), wt(v->child0()));
    case Tag::Smul:
      if (is_value(v)) return Term::smul(v->coeff(), psi(v->child0()));
      break;
    case Tag::Sum:
      if (is_value(v)) return Term::sum(psi(v->child0()), psi(v->child1()));
      break;
    default: break;
  }
  throw NotAValue("value encoding applied to a non-value");
}

// Call-by-name to call-by-value encoding; always a base term.
inline auto cps(const TermPtr& t) -> TermPtr {
  detail::FreshNames fresh(t);
  return detail::cps_impl(t, fresh);
}

// Value counterpart of cps.
inline auto phi(const TermPtr& v) -> TermPtr {
  switch (v->tag()) {
    case Tag::Zero: return v;
    case Tag::Var:
      return Term::app(v, Term::lam("y", Term::var("y")));
    case Tag::Lam: return Term::lam(v->name(), cps(v->child0()));
    case Tag::Smul:
      if (is_value(v)) return Term::smul(v->coeff(), phi(v->child0()));
      break;
    case Tag::Sum:
      if (is_value(v)) return Term::sum(phi(v->child0()), phi(v->child1()));
      break;
    default: break;
  }
  throw NotAValue("value encoding applied to a non-value");
}

namespace detail {

inline auto colon_v_impl(const TermPtr& m, const TermPtr& k, FreshNames& fresh)
    -> TermPtr {
  switch (m->tag()) {
    case Tag::Zero: return Term::zero();
    case Tag::Var:
    case Tag::Lam: return Term::app(k, psi(m));
    case Tag::Smul:
      return Term::smul(m->coeff(), colon_v_impl(m->child0(), k, fresh));
    case Tag::Sum:
      return Term::sum(colon_v_impl(m->child0(), k, fresh),
                       colon_v_impl(m->child1(), k, fresh));
    case Tag::App: {
      const auto& fun = m->child0();
      const auto& arg = m->child1();
      switch (fun->tag()) {
        case Tag::Zero: return Term::zero();
        case Tag::Var:
        case Tag::Lam: {
          auto f = fresh.draw('f');
          auto cont = Term::lam(
              f, Term::app(Term::app(psi(fun), Term::var(f)), k));
          return colon_v_impl(arg, cont, fresh);
        }
        case Tag::Smul:
          return Term::smul(
              fun->coeff(),
              colon_v_impl(Term::app(fun->child0(), arg), k, fresh));
        case Tag::Sum:
          return colon_v_impl(Term::sum(Term::app(fun->child0(), arg),
                                        Term::app(fun->child1(), arg)),
                              k, fresh);
        case Tag::App: {
          auto g = fresh.draw('g');
          auto h = fresh.draw('h');
          auto cont = Term::lam(
              g, Term::app(wt(arg),
                           Term::lam(h, Term::app(Term::app(Term::var(g),
                                                            Term::var(h)),
                                                  k))));
          return colon_v_impl(fun, cont, fresh);
        }
      }
      break;
    }
  }
  throw Error("unreachable");
}

inline auto colon_n_impl(const TermPtr& m, const TermPtr& k, FreshNames& fresh)
    -> TermPtr {
  switch (m->tag()) {
    case Tag::Zero: return Term::zero();
    case Tag::Var:
    case Tag::Lam: return Term::app(k, phi(m));
    case Tag::Smul:
      return Term::smul(m->coeff(), colon_n_impl(m->child0(), k, fresh));
    case Tag::Sum:
      return Term::sum(colon_n_impl(m->child0(), k, fresh),
                       colon_n_impl(m->child1(), k, fresh));
    case Tag::App: {
      const auto& fun = m->child0();
      const auto& arg = m->child1();
      switch (fun->tag()) {
        case Tag::Zero: return Term::zero();
        case Tag::Var:
        case Tag::Lam:
          return Term::app(Term::app(phi(fun), cps(arg)), k);
        case Tag::Smul:
          return Term::smul(
              fun->coeff(),
              colon_n_impl(Term::app(fun->child0(), arg), k, fresh));
        case Tag::Sum:
          return colon_n_impl(Term::sum(Term::app(fun->child0(), arg),
                                        Term::app(fun->child1(), arg)),
                              k, fresh);
        case Tag::App: {
          auto f = fresh.draw('f');
          auto cont = Term::lam(
              f, Term::app(Term::app(Term::var(f), cps(arg)), k));
          return colon_n_impl(fun, cont, fresh);
        }
      }
      break;
    }
  }
  throw Error("unreachable");
}

}  // namespace detail

// Continuation composition for the call-by-value encoding.
inline auto colon_v(const TermPtr& m, const TermPtr& k) -> TermPtr {
  if (!is_base(k)) throw KNotBase("continuation must be a base term");
  detail::FreshNames fresh(m, k);
  return detail::colon_v_impl(m, k, fresh);
}

// Continuation composition for the call-by-name encoding.
inline auto colon_n(const TermPtr& m, const TermPtr& k) -> TermPtr {
  if (!is_base(k)) throw KNotBase("continuation must be a base term");
  detail::FreshNames fresh(m, k);
  return detail::colon_n_impl(m, k, fresh);
}

namespace detail {

inline auto identity_term() -> TermPtr {
  return Term::lam("x", Term::var("x"));
}

// Maps a target-language rule to its counterpart in the other beta discipline;
// nullopt when the rule has no counterpart there.
inline auto common_rule(RuleName r, bool target_is_cbn)
    -> std::optional<RuleName> {
  if (target_is_cbn) {  // target rules are call-by-name, map into call-by-value
    switch (r) {
      case RuleName::BetaN: return RuleName::BetaV;
      case RuleName::A_app_sum: return RuleName::Al_sum;
      case RuleName::A_app_smul: return RuleName::Al_smul;
      case RuleName::A_app_zero: return RuleName::Al_zero;
      default: return r;
    }
  }
  switch (r) {  // target rules are call-by-value
    case RuleName::BetaV: return RuleName::BetaN;
    case RuleName::Al_sum: return RuleName::A_app_sum;
    case RuleName::Al_smul: return RuleName::A_app_smul;
    case RuleName::Al_zero: return RuleName::A_app_zero;
    case RuleName::Ar_sum:
    case RuleName::Ar_smul:
    case RuleName::Ar_zero: return std::nullopt;  // no call-by-name analogue
    default: return r;
  }
}

inline auto position_accessible(const TermPtr& t, const Position& pos,
                                const Language& lang) -> bool {
  auto cur = t;
  for (int step : pos) {
    switch (cur->tag()) {
      case Tag::App:
        if (step == 1 && !(is_cbv(lang) && is_value(cur->child0())))
          return false;
        cur = step == 0 ? cur->child0() : cur->child1();
        break;
      case Tag::Sum:
        cur = step == 0 ? cur->child0() : cur->child1();
        break;
      case Tag::Smul:
        if (step != 0) return false;
        cur = cur->child0();
        break;
      default: return false;  // Lam bodies, Var, Zero have no positions
    }
  }
  return true;
}

// Replays a trace found in the target language using only rules available on
// the source side (the indifference property): every step must map to a rule
// of the other discipline and stay at an accessible position there.
inline auto replay_indifferent(const ReductionTrace& trace,
                               const Language& target_lang) -> bool {
  const bool target_is_cbn = !is_cbv(target_lang);
  const Language other{target_is_cbn ? BetaStyle::CallByValue
                                     : BetaStyle::CallByName,
                       target_lang.algebraic};
  auto cur = trace.start;
  for (const auto& step : trace.steps) {
    auto mapped = common_rule(step.rule, target_is_cbn);
    if (!mapped) return false;
    if (!position_accessible(cur, step.position, other)) return false;
    StepRecord rec{*mapped, step.position, step.reversed, step.result};
    try {
      cur = apply_step(cur, rec, other);
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

}  // namespace detail

struct SimulationReport {
  TermPtr source;
  TermPtr source_value;
  TermPtr translated;
  ReductionTrace target_trace;
  TermPtr encoded_value;
  bool ok = false;
  std::optional<bool> indifference_ok;
  std::string warning;  // e.g. open-term caveat for the cbv-to-cbn direction
};

enum class SimMode { Search, Constructive };

struct SimulationOptions {
  SimMode mode = SimMode::Search;
  bool symmetric = false;  // symmetric target relation, fragment-restricted
  Fragment fragment = unrestricted_fragment();
};

// Checks one instance of the simulation theorems: reduce the source to a value
// V, translate, and find a target-side reduction of (T source) id to the
// encoded value. In constructive mode the target search is guided through the
// continuation-composition images of the source trace as waypoints.
inline auto check_simulation(const TermPtr& m, Direction dir, std::size_t fuel,
                             const SimulationOptions& options = {})
    -> SimulationReport {
  if (dir == Direction::CbnToCbv && !is_closed(m))
    throw NotClosed("the call-by-name simulation needs a closed term");

  const Language source_ori = dir == Direction::CbvToCbn ? kLinRed : kAlgRed;
  const Language target_ori = dir == Direction::CbvToCbn ? kAlgRed : kLinRed;
  const Language source{source_ori.beta, options.symmetric
                                             ? AlgStyle::Symmetric
                                             : AlgStyle::Oriented};
  const Language target{target_ori.beta, options.symmetric
                                             ? AlgStyle::Symmetric
                                             : AlgStyle::Oriented};

  SimulationReport rep;
  rep.source = m;
  if (dir == Direction::CbvToCbn && !is_closed(m))
    rep.warning = "source term is open; the simulation theorem is stated for "
                  "programs, treat the result as informational";

  SearchOptions search_opt;
  search_opt.include_beta = true;
  if (options.symmetric) {
    const Fragment& frag = options.fragment;
    search_opt.admit = [frag](const TermPtr& t) { return frag.ok(t); };
  }

  // Source side: find the value V. In the symmetric variant an oriented trace
  // is still a valid certificate (and far cheaper to find), so it is tried
  // first and the reversed-step search is only a fallback.
  ReductionTrace source_trace{m, {}};
  if (options.symmetric) {
    auto value_goal = [](const TermPtr& t) { return is_value(t); };
    auto found = detail::search_goal(m, source_ori, fuel, search_opt, value_goal);
    if (!found) found = detail::search_goal(m, source, fuel, search_opt, value_goal);
    if (!found) throw SourceNotTerminating(ReductionTrace{m, {}});
    source_trace = std::move(*found);
  } else {
    try {
      source_trace = reduce(m, source, Strategy::LeftmostOutermost, fuel);
    } catch (const FuelExhausted& e) {
      throw SourceNotTerminating(e.partial);
    }
  }
  rep.source_value = source_trace.end();
  if (!is_value(rep.source_value))
    throw NotAValue("source reduction ended in a non-value (open term stuck)");

  rep.translated = dir == Direction::CbvToCbn ? wt(m) : cps(m);
  rep.encoded_value = dir == Direction::CbvToCbn ? psi(rep.source_value)
                                                 : phi(rep.source_value);
  auto id = detail::identity_term();
  auto start = Term::app(rep.translated, id);
  rep.target_trace = ReductionTrace{start, {}};

  auto colon = [&](const TermPtr& t) {
    return dir == Direction::CbvToCbn ? colon_v(t, id) : colon_n(t, id);
  };

  if (options.mode == SimMode::Search || options.symmetric) {
    std::optional<ReductionTrace> trace;
    if (options.symmetric)
      trace = reduces_to(start, rep.encoded_value, target_ori, fuel, search_opt);
    if (!trace)
      trace = reduces_to(start, rep.encoded_value, target, fuel, search_opt);
    if (trace) rep.target_trace = std::move(*trace);
  } else {
    // Waypoints: (T m) id ->* m:id ->* ... ->* V:id ->* encoded value.
    std::vector<TermPtr> waypoints;
    waypoints.push_back(colon(source_trace.start));
    for (const auto& s : source_trace.steps) waypoints.push_back(colon(s.result));
    waypoints.push_back(rep.encoded_value);
    auto cur = start;
    for (const auto& w : waypoints) {
      auto hop = reduces_to(cur, w, target, fuel, search_opt);
      if (!hop) break;
      rep.target_trace.steps.insert(rep.target_trace.steps.end(),
                                    hop->steps.begin(), hop->steps.end());
      cur = rep.target_trace.end();
    }
  }

  rep.ok = ac_equal(rep.target_trace.end(), rep.encoded_value);
  if (rep.ok && !rep.target_trace.steps.empty())
    rep.indifference_ok = detail::replay_indifferent(rep.target_trace, target);
  else if (rep.ok)
    rep.indifference_ok = true;  // empty trace replays trivially
  return rep;
}

struct ColonLemmasReport {
  bool translation_reaches_colon = false;   // (T m) k ->* m:k
  bool steps_preserved = false;             // m -> n implies m:k ->* n:k
  std::optional<bool> value_encoding;       // values: v:id ->* encoded v
};

// Bounded checks of the three continuation-composition lemmas for one input.
inline auto check_colon_lemmas(const TermPtr& m, const TermPtr& k,
                               Direction dir, std::size_t fuel)
    -> ColonLemmasReport {
  if (!is_base(k)) throw KNotBase("continuation must be a base term");
  const Language source = dir == Direction::CbvToCbn ? kLinRed : kAlgRed;
  const Language target = dir == Direction::CbvToCbn ? kAlgRed : kLinRed;
  auto translate = [&](const TermPtr& t) {
    return dir == Direction::CbvToCbn ? wt(t) : cps(t);
  };
  auto colon = [&](const TermPtr& t, const TermPtr& cont) {
    return dir == Direction::CbvToCbn ? colon_v(t, cont) : colon_n(t, cont);
  };

  ColonLemmasReport rep;
  auto mk = colon(m, k);
  rep.translation_reaches_colon =
      reduces_to(Term::app(translate(m), k), mk, target, fuel).has_value();

  rep.steps_preserved = true;
  for (const auto& s : step_all(m, source)) {
    if (!reduces_to(mk, colon(s.result, k), target, fuel)) {
      rep.steps_preserved = false;
      break;
    }
  }

  if (is_value(m)) {
    auto id = detail::identity_term();
    auto encoded = dir == Direction::CbvToCbn ? psi(m) : phi(m);
    rep.value_encoding =
        reduces_to(colon(m, id), encoded, target, fuel).has_value();
  }
  return rep;
}

}  // namespace alam
