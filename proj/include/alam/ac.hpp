#pragma once

#include <algorithm>
#include <vector>

#include "alam/rules.hpp"
#include "alam/term.hpp"

namespace alam {

struct NonAlgebraicStep : Error {
  using Error::Error;
};

enum class CanonLevel { ACOnly, ACPlusAlgebraic };

inline auto parse_canon_level(const std::string& s) -> std::optional<CanonLevel> {
  if (s == "ac") return CanonLevel::ACOnly;
  if (s == "ac+algebraic" || s == "full") return CanonLevel::ACPlusAlgebraic;
  return std::nullopt;
}

namespace detail {

inline void flatten_sum(const TermPtr& t, std::vector<TermPtr>& out) {
  if (t->tag() == Tag::Sum) {
    flatten_sum(t->child0(), out);
    flatten_sum(t->child1(), out);
  } else {
    out.push_back(t);
  }
}

inline auto rebuild_sum(const std::vector<TermPtr>& parts) -> TermPtr {
  if (parts.empty()) return Term::zero();
  TermPtr acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;)
    acc = Term::sum(parts[i], acc);
  return acc;
}

// Pure AC quotient: flatten sums and sort summands at every position, binder
// bodies included (this is the equational theory, not a reduction).
inline auto sort_ac(const TermPtr& t) -> TermPtr {
  switch (t->tag()) {
    case Tag::Zero:
    case Tag::Var: return t;
    case Tag::Lam: return Term::lam(t->name(), sort_ac(t->child0()));
    case Tag::App:
      return Term::app(sort_ac(t->child0()), sort_ac(t->child1()));
    case Tag::Smul: return Term::smul(t->coeff(), sort_ac(t->child0()));
    case Tag::Sum: {
      std::vector<TermPtr> parts;
      flatten_sum(t, parts);
      for (auto& p : parts) p = sort_ac(p);
      std::sort(parts.begin(), parts.end(),
                [](const TermPtr& a, const TermPtr& b) {
                  return term_compare(a, b) < 0;
                });
      return rebuild_sum(parts);
    }
  }
  return t;
}

// Splits a summand into (coefficient, core) so that a.M and M group together.
inline auto summand_core(const TermPtr& t) -> std::pair<Scalar, TermPtr> {
  if (t->tag() == Tag::Smul) return {t->coeff(), t->child0()};
  return {Scalar(1), t};
}

// Normal form for the oriented F/S rules under their own context rules: only
// the function side of applications is reachable and binder bodies are not.
// Input is assumed sort_ac'd; output sums are core-sorted and merged.
inline auto alg_norm(const TermPtr& t) -> TermPtr;

inline auto alg_norm_smul(const Scalar& coeff, const TermPtr& body) -> TermPtr {
  if (coeff.is_zero()) return Term::zero();          // 0.M -> 0
  if (body->tag() == Tag::Zero) return Term::zero();  // a.0 -> 0
  if (body->tag() == Tag::Smul)                       // a.(b.M) -> (ab).M
    return alg_norm_smul(coeff * body->coeff(), body->child0());
  if (body->tag() == Tag::Sum)                        // a.(M+N) -> a.M + a.N
    return alg_norm(Term::sum(Term::smul(coeff, body->child0()),
                              Term::smul(coeff, body->child1())));
  if (coeff.is_one()) return body;                    // 1.M -> M
  return Term::smul(coeff, body);
}

inline auto alg_norm(const TermPtr& t) -> TermPtr {
  switch (t->tag()) {
    case Tag::Zero:
    case Tag::Var:
    case Tag::Lam: return t;
    case Tag::App: return Term::app(alg_norm(t->child0()), t->child1());
    case Tag::Smul: return alg_norm_smul(t->coeff(), alg_norm(t->child0()));
    case Tag::Sum: {
      std::vector<TermPtr> parts;
      flatten_sum(t, parts);
      std::vector<std::pair<Scalar, TermPtr>> merged;
      for (const auto& raw : parts) {
        auto p = alg_norm(raw);
        std::vector<TermPtr> sub;
        flatten_sum(p, sub);  // alg_norm may re-expand via S_dist
        for (const auto& s : sub) {
          if (s->tag() == Tag::Zero) continue;  // 0+M -> M
          auto [c, core] = summand_core(s);
          bool found = false;
          for (auto& [mc, mcore] : merged) {
            if (alpha_equal(mcore, core)) {
              mc = mc + c;  // F rules: a.M + b.M -> (a+b).M
              found = true;
              break;
            }
          }
          if (!found) merged.emplace_back(c, core);
        }
      }
      std::vector<TermPtr> out;
      for (auto& [c, core] : merged) {
        if (c.is_zero()) continue;
        out.push_back(c.is_one() ? core : Term::smul(c, core));
      }
      std::sort(out.begin(), out.end(), [](const TermPtr& a, const TermPtr& b) {
        return term_compare(a, b) < 0;
      });
      return rebuild_sum(out);
    }
  }
  return t;
}

}  // namespace detail

inline auto ac_canonical(const TermPtr& t, CanonLevel level) -> TermPtr {
  auto sorted = detail::sort_ac(t);
  if (level == CanonLevel::ACOnly) return sorted;
  return detail::alg_norm(sorted);
}

inline auto ac_equal(const TermPtr& a, const TermPtr& b) -> bool {
  return alpha_equal(ac_canonical(a, CanonLevel::ACOnly),
                     ac_canonical(b, CanonLevel::ACOnly));
}

// Termination measure for the algebraic rules: invariant under Asso/Com,
// strictly decreasing under every other algebraic rule.
inline auto ac_measure(const TermPtr& t) -> Natural {
  switch (t->tag()) {
    case Tag::Zero: return Natural(0);
    case Tag::Var:
    case Tag::Lam: return Natural(1);
    case Tag::Smul: return 1 + 2 * ac_measure(t->child0());
    case Tag::Sum: return 2 + ac_measure(t->child0()) + ac_measure(t->child1());
    case Tag::App:
      return (3 * ac_measure(t->child0()) + 2) *
             (3 * ac_measure(t->child1()) + 2);
  }
  return Natural(0);
}

// Number of non-Asso/Com steps in an algebraic trace.
inline auto ac_length(const ReductionTrace& trace) -> std::size_t {
  std::size_t n = 0;
  for (const auto& s : trace.steps) {
    if (is_beta_rule(s.rule))
      throw NonAlgebraicStep("trace contains a beta step: " +
                             rule_name_str(s.rule));
    if (!is_ac_rule(s.rule)) ++n;
  }
  return n;
}

}  // namespace alam
