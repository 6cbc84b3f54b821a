#pragma once

#include <cassert>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "alam/scalar.hpp"

namespace alam {

enum class Tag { Zero, Var, Lam, App, Sum, Smul };

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable term of the algebraic lambda-calculus:
//   M ::= 0 | x | \x.M | (M) N | M + N | a.M
// Subterms are shared; all rewriting builds new spines.
class Term {
 public:
  auto tag() const -> Tag { return tag_; }

  // Var name or Lam binder.
  auto name() const -> const std::string& { return name_; }
  // Lam body, App function, Sum left, Smul body.
  auto child0() const -> const TermPtr& { return c0_; }
  // App argument, Sum right.
  auto child1() const -> const TermPtr& { return c1_; }
  auto coeff() const -> const Scalar& { return coeff_; }

  static auto zero() -> TermPtr {
    static const TermPtr z = make(Tag::Zero);
    return z;
  }
  static auto var(std::string name) -> TermPtr {
    auto t = make(Tag::Var);
    t->name_ = std::move(name);
    return t;
  }
  static auto lam(std::string binder, TermPtr body) -> TermPtr {
    auto t = make(Tag::Lam);
    t->name_ = std::move(binder);
    t->c0_ = std::move(body);
    return t;
  }
  static auto app(TermPtr fun, TermPtr arg) -> TermPtr {
    auto t = make(Tag::App);
    t->c0_ = std::move(fun);
    t->c1_ = std::move(arg);
    return t;
  }
  static auto sum(TermPtr lhs, TermPtr rhs) -> TermPtr {
    auto t = make(Tag::Sum);
    t->c0_ = std::move(lhs);
    t->c1_ = std::move(rhs);
    return t;
  }
  static auto smul(Scalar coeff, TermPtr body) -> TermPtr {
    auto t = make(Tag::Smul);
    t->coeff_ = std::move(coeff);
    t->c0_ = std::move(body);
    return t;
  }

 private:
  static auto make(Tag tag) -> std::shared_ptr<Term> {
    auto t = std::make_shared<Term>(Private{});
    t->tag_ = tag;
    return t;
  }
  struct Private {};

 public:
  explicit Term(Private) {}

 private:
  Tag tag_ = Tag::Zero;
  std::string name_;
  TermPtr c0_;
  TermPtr c1_;
  Scalar coeff_;
};

// Node count; drives size-bounded fragments and generator budgets.
inline auto term_size(const TermPtr& t) -> std::size_t {
  switch (t->tag()) {
    case Tag::Zero:
    case Tag::Var: return 1;
    case Tag::Lam:
    case Tag::Smul: return 1 + term_size(t->child0());
    case Tag::App:
    case Tag::Sum: return 1 + term_size(t->child0()) + term_size(t->child1());
  }
  return 0;
}

inline void collect_free_vars(const TermPtr& t, std::set<std::string>& bound,
                              std::set<std::string>& out) {
  switch (t->tag()) {
    case Tag::Zero: return;
    case Tag::Var:
      if (!bound.count(t->name())) out.insert(t->name());
      return;
    case Tag::Lam: {
      auto [it, inserted] = bound.insert(t->name());
      collect_free_vars(t->child0(), bound, out);
      if (inserted) bound.erase(it);
      return;
    }
    case Tag::App:
    case Tag::Sum:
      collect_free_vars(t->child0(), bound, out);
      collect_free_vars(t->child1(), bound, out);
      return;
    case Tag::Smul:
      collect_free_vars(t->child0(), bound, out);
      return;
  }
}

inline auto free_vars(const TermPtr& t) -> std::set<std::string> {
  std::set<std::string> bound, out;
  collect_free_vars(t, bound, out);
  return out;
}

inline auto is_closed(const TermPtr& t) -> bool { return free_vars(t).empty(); }

// Every variable or binder name occurring anywhere, for fresh-name generation.
inline void collect_all_names(const TermPtr& t, std::set<std::string>& out) {
  switch (t->tag()) {
    case Tag::Zero: return;
    case Tag::Var: out.insert(t->name()); return;
    case Tag::Lam:
      out.insert(t->name());
      collect_all_names(t->child0(), out);
      return;
    case Tag::App:
    case Tag::Sum:
      collect_all_names(t->child0(), out);
      collect_all_names(t->child1(), out);
      return;
    case Tag::Smul: collect_all_names(t->child0(), out); return;
  }
}

inline auto all_names(const TermPtr& t) -> std::set<std::string> {
  std::set<std::string> out;
  collect_all_names(t, out);
  return out;
}

inline auto fresh_name(const std::string& base, const std::set<std::string>& avoid)
    -> std::string {
  // Strip a numeric suffix so y1 freshens to y2, not y11.
  std::size_t end = base.size();
  while (end > 0 && std::isdigit(static_cast<unsigned char>(base[end - 1]))) --end;
  std::string stem = end > 0 ? base.substr(0, end) : "v";
  for (int i = 1;; ++i) {
    std::string candidate = stem + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

// Base terms B ::= x | \x.M.
inline auto is_base(const TermPtr& t) -> bool {
  return t->tag() == Tag::Var || t->tag() == Tag::Lam;
}

// Values V ::= 0 | B | a.V | V + W.
inline auto is_value(const TermPtr& t) -> bool {
  switch (t->tag()) {
    case Tag::Zero: return true;
    case Tag::Var:
    case Tag::Lam: return true;
    case Tag::Smul: return is_value(t->child0());
    case Tag::Sum: return is_value(t->child0()) && is_value(t->child1());
    case Tag::App: return false;
  }
  return false;
}

// Capture-avoiding substitution t[x := arg]. Binders are renamed only when they
// would capture a free variable of arg.
inline auto substitute(const TermPtr& t, const std::string& x, const TermPtr& arg)
    -> TermPtr {
  switch (t->tag()) {
    case Tag::Zero: return t;
    case Tag::Var: return t->name() == x ? arg : t;
    case Tag::App: {
      auto f = substitute(t->child0(), x, arg);
      auto a = substitute(t->child1(), x, arg);
      if (f == t->child0() && a == t->child1()) return t;
      return Term::app(std::move(f), std::move(a));
    }
    case Tag::Sum: {
      auto l = substitute(t->child0(), x, arg);
      auto r = substitute(t->child1(), x, arg);
      if (l == t->child0() && r == t->child1()) return t;
      return Term::sum(std::move(l), std::move(r));
    }
    case Tag::Smul: {
      auto b = substitute(t->child0(), x, arg);
      if (b == t->child0()) return t;
      return Term::smul(t->coeff(), std::move(b));
    }
    case Tag::Lam: {
      if (t->name() == x) return t;
      auto fv_body = free_vars(t->child0());
      if (!fv_body.count(x)) return t;
      auto fv_arg = free_vars(arg);
      if (fv_arg.count(t->name())) {
        auto avoid = fv_arg;
        avoid.insert(fv_body.begin(), fv_body.end());
        avoid.insert(x);
        std::string y = fresh_name(t->name(), avoid);
        auto renamed = substitute(t->child0(), t->name(), Term::var(y));
        return Term::lam(y, substitute(renamed, x, arg));
      }
      return Term::lam(t->name(), substitute(t->child0(), x, arg));
    }
  }
  return t;
}

namespace detail {

// Total order on alpha-equivalence classes: bound variables compare by de
// Bruijn index, free variables by name, then (tag rank, children, scalar).
inline auto term_cmp(const TermPtr& a, const TermPtr& b,
                     std::vector<std::string>& env_a,
                     std::vector<std::string>& env_b) -> int {
  auto rank = [](Tag tag) {
    switch (tag) {
      case Tag::Zero: return 0;
      case Tag::Var: return 1;
      case Tag::Lam: return 2;
      case Tag::App: return 3;
      case Tag::Sum: return 4;
      case Tag::Smul: return 5;
    }
    return 6;
  };
  if (rank(a->tag()) != rank(b->tag()))
    return rank(a->tag()) < rank(b->tag()) ? -1 : 1;
  switch (a->tag()) {
    case Tag::Zero: return 0;
    case Tag::Var: {
      auto index_of = [](const std::vector<std::string>& env,
                         const std::string& name) -> long {
        for (std::size_t i = env.size(); i-- > 0;)
          if (env[i] == name) return static_cast<long>(env.size() - 1 - i);
        return -1;
      };
      long ia = index_of(env_a, a->name());
      long ib = index_of(env_b, b->name());
      bool bound_a = ia >= 0, bound_b = ib >= 0;
      if (bound_a != bound_b) return bound_a ? -1 : 1;
      if (bound_a) return ia == ib ? 0 : (ia < ib ? -1 : 1);
      int c = a->name().compare(b->name());
      return c == 0 ? 0 : (c < 0 ? -1 : 1);
    }
    case Tag::Lam: {
      env_a.push_back(a->name());
      env_b.push_back(b->name());
      int c = term_cmp(a->child0(), b->child0(), env_a, env_b);
      env_a.pop_back();
      env_b.pop_back();
      return c;
    }
    case Tag::App:
    case Tag::Sum: {
      int c = term_cmp(a->child0(), b->child0(), env_a, env_b);
      if (c != 0) return c;
      return term_cmp(a->child1(), b->child1(), env_a, env_b);
    }
    case Tag::Smul: {
      int c = term_cmp(a->child0(), b->child0(), env_a, env_b);
      if (c != 0) return c;
      if (a->coeff() == b->coeff()) return 0;
      return a->coeff() < b->coeff() ? -1 : 1;
    }
  }
  return 0;
}

}  // namespace detail

inline auto term_compare(const TermPtr& a, const TermPtr& b) -> int {
  if (a == b) return 0;
  std::vector<std::string> env_a, env_b;
  return detail::term_cmp(a, b, env_a, env_b);
}

inline auto alpha_equal(const TermPtr& a, const TermPtr& b) -> bool {
  return term_compare(a, b) == 0;
}

// Positions address children as: App 0=function 1=argument, Sum 0=left 1=right,
// Smul 0=body, Lam 0=body. [] is the root.
using Position = std::vector<int>;

inline auto position_str(const Position& p) -> std::string {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + "]";
}

inline auto subterm_at(const TermPtr& t, const Position& pos, std::size_t from = 0)
    -> TermPtr {
  if (from == pos.size()) return t;
  int i = pos[from];
  switch (t->tag()) {
    case Tag::Lam:
    case Tag::Smul:
      if (i == 0) return subterm_at(t->child0(), pos, from + 1);
      break;
    case Tag::App:
    case Tag::Sum:
      if (i == 0) return subterm_at(t->child0(), pos, from + 1);
      if (i == 1) return subterm_at(t->child1(), pos, from + 1);
      break;
    default: break;
  }
  throw Error("position " + position_str(pos) + " does not exist in term");
}

inline auto replace_at(const TermPtr& t, const Position& pos, const TermPtr& sub,
                       std::size_t from = 0) -> TermPtr {
  if (from == pos.size()) return sub;
  int i = pos[from];
  switch (t->tag()) {
    case Tag::Lam:
      if (i == 0)
        return Term::lam(t->name(), replace_at(t->child0(), pos, sub, from + 1));
      break;
    case Tag::Smul:
      if (i == 0)
        return Term::smul(t->coeff(), replace_at(t->child0(), pos, sub, from + 1));
      break;
    case Tag::App:
      if (i == 0)
        return Term::app(replace_at(t->child0(), pos, sub, from + 1), t->child1());
      if (i == 1)
        return Term::app(t->child0(), replace_at(t->child1(), pos, sub, from + 1));
      break;
    case Tag::Sum:
      if (i == 0)
        return Term::sum(replace_at(t->child0(), pos, sub, from + 1), t->child1());
      if (i == 1)
        return Term::sum(t->child0(), replace_at(t->child1(), pos, sub, from + 1));
      break;
    default: break;
  }
  throw Error("position " + position_str(pos) + " does not exist in term");
}

// Scalars mentioned by the term, for bounded reverse-step enumeration.
inline void collect_scalars(const TermPtr& t, std::set<Rational>& out) {
  switch (t->tag()) {
    case Tag::Zero:
    case Tag::Var: return;
    case Tag::Lam: collect_scalars(t->child0(), out); return;
    case Tag::Smul:
      out.insert(t->coeff().value());
      collect_scalars(t->child0(), out);
      return;
    case Tag::App:
    case Tag::Sum:
      collect_scalars(t->child0(), out);
      collect_scalars(t->child1(), out);
      return;
  }
}

}  // namespace alam
