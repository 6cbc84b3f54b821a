#pragma once

#include <string>

#include "alam/term.hpp"

namespace alam {
namespace detail {

// Grammar levels: sum < smul < appl < atom. `tail` marks positions where a
// lambda can extend to the end of the enclosing expression without parens.
inline auto print_sum(const TermPtr& t, bool tail) -> std::string;

inline auto print_atom(const TermPtr& t) -> std::string {
  switch (t->tag()) {
    case Tag::Zero: return "0";
    case Tag::Var: return t->name();
    default: return "(" + print_sum(t, true) + ")";
  }
}

inline auto print_appl(const TermPtr& t, bool tail) -> std::string {
  if (t->tag() == Tag::App)
    return "(" + print_sum(t->child0(), true) + ") " + print_atom(t->child1());
  if (t->tag() == Tag::Lam) {
    std::string body = "\xce\xbb" + t->name() + "." + print_sum(t->child0(), true);
    return tail ? body : "(" + body + ")";
  }
  return print_atom(t);
}

inline auto print_smul(const TermPtr& t, bool tail) -> std::string {
  if (t->tag() == Tag::Smul)
    return t->coeff().str() + "." + print_atom(t->child0());
  if (t->tag() == Tag::Sum) return "(" + print_sum(t, true) + ")";
  return print_appl(t, tail);
}

inline auto print_sum(const TermPtr& t, bool tail) -> std::string {
  if (t->tag() == Tag::Sum)
    return print_sum(t->child0(), false) + " + " + print_smul(t->child1(), tail);
  return print_smul(t, tail);
}

}  // namespace detail

// Surface syntax, re-parseable: applications print as "(M) N", scalar
// multiplication binds tighter than +, negative coefficients are parenthesized.
inline auto to_string(const TermPtr& t) -> std::string {
  return detail::print_sum(t, true);
}

}  // namespace alam
