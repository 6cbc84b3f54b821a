#pragma once

#include <random>
#include <string>
#include <vector>

#include "alam/scalar.hpp"
#include "alam/term.hpp"

namespace alam {

// Seeded term generator for property tests and the confluence lab. Draws use
// modulo on the raw engine output so sequences are reproducible across
// standard libraries.
struct GenOptions {
  std::size_t max_size = 20;  // node budget
  bool closed = false;
  ScalarDomain domain = ScalarDomain::Ring;
  bool value_only = false;
};

namespace detail {

inline auto draw(std::mt19937_64& rng, std::size_t n) -> std::size_t {
  return static_cast<std::size_t>(rng() % n);
}

inline auto random_scalar(std::mt19937_64& rng, ScalarDomain domain) -> Scalar {
  static const std::vector<Rational> ring = {
      Rational(0), Rational(1),     Rational(2),      Rational(3),
      Rational(5), Rational(-1),    Rational(-2),     Rational(1, 2),
      Rational(3, 2), Rational(-1, 2)};
  static const std::vector<Rational> nonneg = {
      Rational(0), Rational(1), Rational(2), Rational(3),
      Rational(5), Rational(1, 2), Rational(3, 2)};
  const auto& pool = domain == ScalarDomain::Ring ? ring : nonneg;
  return Scalar(pool[draw(rng, pool.size())]);
}

inline auto gen_term(std::mt19937_64& rng, const GenOptions& opt,
                     std::size_t budget, std::vector<std::string>& env,
                     bool value_only) -> TermPtr {
  static const std::vector<std::string> free_pool = {"x", "y", "z"};
  auto gen_var = [&]() -> TermPtr {
    if (!env.empty() && (opt.closed || draw(rng, 2) == 0))
      return Term::var(env[draw(rng, env.size())]);
    return Term::var(free_pool[draw(rng, free_pool.size())]);
  };
  auto gen_lam = [&](std::size_t inner) -> TermPtr {
    std::string binder = "v" + std::to_string(env.size());
    env.push_back(binder);
    // A lambda body is an arbitrary term: every abstraction is a value.
    auto body = gen_term(rng, opt, inner, env, false);
    env.pop_back();
    return Term::lam(binder, body);
  };
  if (budget <= 1) {
    if (opt.closed && env.empty()) return Term::zero();
    return draw(rng, 4) == 0 ? Term::zero() : gen_var();
  }
  // Weighted tag choice; binary nodes need budget >= 3. Leaves are cheap at
  // any budget, so they get low weight here to keep sizes near the budget.
  struct Choice {
    int weight;
    int tag;  // 0 var, 1 zero, 2 lam, 3 smul, 4 app, 5 sum
  };
  std::vector<Choice> choices = {{1, 0}, {3, 2}, {3, 3}};
  if (budget >= 3) {
    if (!value_only) choices.push_back({5, 4});
    choices.push_back({5, 5});
  }
  if (opt.closed && env.empty())
    std::erase_if(choices, [](const Choice& c) { return c.tag == 0; });
  int total = 0;
  for (const auto& c : choices) total += c.weight;
  int pick = static_cast<int>(draw(rng, static_cast<std::size_t>(total)));
  int tag = choices.back().tag;
  for (const auto& c : choices) {
    if (pick < c.weight) {
      tag = c.tag;
      break;
    }
    pick -= c.weight;
  }
  switch (tag) {
    case 0: return gen_var();
    case 1: return Term::zero();
    case 2: return gen_lam(budget - 1);
    case 3:
      return Term::smul(random_scalar(rng, opt.domain),
                        gen_term(rng, opt, budget - 1, env, value_only));
    case 4:
    case 5: {
      std::size_t rest = budget - 1;
      std::size_t left = 1 + draw(rng, rest - 1);
      auto a = gen_term(rng, opt, left, env, value_only);
      auto b = gen_term(rng, opt, rest - left, env, value_only);
      return tag == 4 ? Term::app(a, b) : Term::sum(a, b);
    }
    default: return Term::zero();
  }
}

}  // namespace detail

inline auto random_term(std::mt19937_64& rng, const GenOptions& opt) -> TermPtr {
  std::vector<std::string> env;
  std::size_t budget = 1 + detail::draw(rng, opt.max_size);
  return detail::gen_term(rng, opt, budget, env, opt.value_only);
}

}  // namespace alam
