#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "alam/scalar.hpp"
#include "alam/term.hpp"

namespace alam {

// A sub-language the equational search is restricted to: every term on a
// derivation, including intermediates, must satisfy term_ok.
struct Fragment {
  std::string name;
  std::function<bool(const TermPtr&)> term_ok;
  ScalarDomain scalar_domain = ScalarDomain::Ring;

  auto ok(const TermPtr& t) const -> bool { return !term_ok || term_ok(t); }
};

inline auto unrestricted_fragment() -> Fragment {
  return Fragment{"unrestricted", {}, ScalarDomain::Ring};
}

// All coefficients (anywhere in the term, lambda bodies included) must be
// non-negative. Closed under the oriented rules: they only add, multiply, and
// duplicate existing coefficients.
inline auto nonneg_fragment() -> Fragment {
  Fragment f;
  f.name = "nonneg";
  f.scalar_domain = ScalarDomain::NonNegSemiring;
  f.term_ok = [](const TermPtr& t) {
    std::set<Rational> scalars;
    collect_scalars(t, scalars);
    for (const auto& r : scalars)
      if (r < 0) return false;
    return true;
  };
  return f;
}

// Search-control fragment: keeps explored terms small. Not closed under
// reduction (substitution can grow a term), so it is excluded from closure
// guarantees and only used to bound searches.
inline auto size_bounded_fragment(std::size_t max_size) -> Fragment {
  Fragment f;
  f.name = "size:" + std::to_string(max_size);
  f.term_ok = [max_size](const TermPtr& t) {
    return term_size(t) <= max_size;
  };
  return f;
}

inline auto parse_fragment(const std::string& s) -> std::optional<Fragment> {
  if (s.empty() || s == "none" || s == "unrestricted")
    return unrestricted_fragment();
  if (s == "nonneg") return nonneg_fragment();
  if (s.rfind("size:", 0) == 0) {
    try {
      std::size_t pos = 0;
      auto n = std::stoul(s.substr(5), &pos);
      if (pos != s.size() - 5) return std::nullopt;
      return size_bounded_fragment(n);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace alam
