#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "alam/ac.hpp"
#include "alam/parse.hpp"
#include "alam/print.hpp"
#include "alam/rng.hpp"
#include "alam/rules.hpp"

using namespace alam;

namespace {

auto P(const std::string& s) -> TermPtr { return parse(s); }

auto has_step(const std::vector<StepRecord>& steps, RuleName rule,
              const Position& pos, const TermPtr& result) -> bool {
  return std::any_of(steps.begin(), steps.end(), [&](const StepRecord& s) {
    return s.rule == rule && s.position == pos && !s.reversed &&
           alpha_equal(s.result, result);
  });
}

// True if walking to `pos` passes through a lambda body.
auto passes_under_lambda(const TermPtr& t, const Position& pos) -> bool {
  auto cur = t;
  for (int i : pos) {
    if (cur->tag() == Tag::Lam) return true;
    cur = i == 0 ? cur->child0() : cur->child1();
  }
  return false;
}

}  // namespace

TEST_CASE("beta rules respect their argument side conditions") {
  auto redex = P("(\\x.(x) x) y");
  auto steps_v = step_all(redex, kLinRed);
  REQUIRE(has_step(steps_v, RuleName::BetaV, {}, P("(y) y")));
  auto steps_n = step_all(redex, kAlgRed);
  REQUIRE(has_step(steps_n, RuleName::BetaN, {}, P("(y) y")));

  // A sum argument blocks beta_v but not beta_n.
  auto wide = P("(\\x.(x) x) (2.y + 3.z)");
  for (const auto& s : step_all(wide, kLinRed))
    REQUIRE(s.rule != RuleName::BetaV);
  auto n = step_all(wide, kAlgRed);
  REQUIRE(n.size() == 1);
  REQUIRE(n[0].rule == RuleName::BetaN);
  REQUIRE(alpha_equal(n[0].result, P("(2.y + 3.z) (2.y + 3.z)")));
}

TEST_CASE("application linearity: call-by-name group A") {
  REQUIRE(has_step(step_all(P("(x + y) z"), kAlgRed), RuleName::A_app_sum, {},
                   P("(x) z + (y) z")));
  REQUIRE(has_step(step_all(P("(2.x) ((y) y)"), kAlgRed), RuleName::A_app_smul,
                   {}, P("2.((x) ((y) y))")));
  REQUIRE(has_step(step_all(P("(0) ((y) y)"), kAlgRed), RuleName::A_app_zero, {},
                   Term::zero()));
  // No side conditions: the argument may be any term.
  REQUIRE(!step_all(P("(x + y) ((z) z)"), kAlgRed).empty());
}

TEST_CASE("application linearity: call-by-value groups A_l and A_r") {
  // A_l needs a value argument: an application argument blocks the whole group.
  REQUIRE(has_step(step_all(P("(x + y) z"), kLinRed), RuleName::Al_sum, {},
                   P("(x) z + (y) z")));
  for (const auto& s : step_all(P("(x + y) ((z) z)"), kLinRed))
    REQUIRE(s.rule == RuleName::Com);
  REQUIRE(has_step(step_all(P("(2.x) z"), kLinRed), RuleName::Al_smul, {},
                   P("2.((x) z)")));
  REQUIRE(has_step(step_all(P("(0) z"), kLinRed), RuleName::Al_zero, {},
                   Term::zero()));
  auto zero_app = step_all(P("(0) z"), kLinRed);
  REQUIRE(zero_app.size() == 1);

  // A_r needs a basis-term function.
  REQUIRE(has_step(step_all(P("(x) (y + z)"), kLinRed), RuleName::Ar_sum, {},
                   P("(x) y + (x) z")));
  REQUIRE(has_step(step_all(P("(x) (2.y)"), kLinRed), RuleName::Ar_smul, {},
                   P("2.((x) y)")));
  REQUIRE(has_step(step_all(P("(x) 0"), kLinRed), RuleName::Ar_zero, {},
                   Term::zero()));
  // 2.x is a value but not a basis term: A_l fires on the function side, but
  // the A_r group stays off.
  auto smul_fun = step_all(P("(2.x) (y + z)"), kLinRed);
  REQUIRE(has_step(smul_fun, RuleName::Al_smul, {}, P("2.((x) (y + z))")));
  for (const auto& s : smul_fun) REQUIRE(s.rule != RuleName::Ar_sum);
}

TEST_CASE("factorization rules match only the written orientations") {
  REQUIRE(has_step(step_all(P("2.x + 3.x"), kAlgRed), RuleName::F_fact, {},
                   P("5.x")));
  REQUIRE(has_step(step_all(P("2.x + x"), kAlgRed), RuleName::F_fact1, {},
                   P("3.x")));
  REQUIRE(has_step(step_all(P("x + x"), kAlgRed), RuleName::F_fact11, {},
                   P("2.x")));
  REQUIRE(has_step(step_all(P("2.(3.x)"), kAlgRed), RuleName::F_smul_smul, {},
                   P("6.x")));
  // Alpha-equivalent bodies merge.
  REQUIRE(has_step(step_all(P("2.(\\x.x) + 3.(\\y.y)"), kAlgRed),
                   RuleName::F_fact, {}, P("5.(\\x.x)")));
  // x + 2.x is not an F-redex; Com must flip it first.
  auto flipped = step_all(P("x + 2.x"), kAlgRed);
  for (const auto& s : flipped)
    REQUIRE((s.rule == RuleName::Com || s.position != Position{}));
}

TEST_CASE("simplification rules") {
  REQUIRE(has_step(step_all(P("2.(x + y)"), kAlgRed), RuleName::S_dist, {},
                   P("2.x + 2.y")));
  REQUIRE(has_step(step_all(P("1.x"), kAlgRed), RuleName::S_one, {}, P("x")));
  REQUIRE(has_step(step_all(P("0.x"), kAlgRed), RuleName::S_zero_coeff, {},
                   Term::zero()));
  REQUIRE(has_step(step_all(P("2.0"), kAlgRed), RuleName::S_zero_term, {},
                   Term::zero()));
  REQUIRE(has_step(step_all(P("0 + x"), kAlgRed), RuleName::S_zero_sum, {},
                   P("x")));
  // M + 0 is handled by Com, not by a mirrored rule.
  auto right_zero = step_all(P("x + 0"), kAlgRed);
  REQUIRE(right_zero.size() == 1);
  REQUIRE(right_zero[0].rule == RuleName::Com);
}

TEST_CASE("associativity and commutativity are explicit steps") {
  auto t = P("x + (y + z)");
  REQUIRE(has_step(step_all(t, kAlgRed), RuleName::Asso_L, {},
                   P("(x + y) + z")));
  REQUIRE(has_step(step_all(P("(x + y) + z"), kAlgRed), RuleName::Asso_R, {},
                   t));
  REQUIRE(has_step(step_all(P("x + y"), kAlgRed), RuleName::Com, {},
                   P("y + x")));
}

TEST_CASE("context rules: argument positions only under call-by-value values") {
  // CBV: function is a value, so the argument is reducible.
  REQUIRE(has_step(step_all(P("(x) (1.y)"), kLinRed), RuleName::S_one, {1},
                   P("(x) y")));
  // CBV: function is not a value, argument frozen (and no root rule applies).
  REQUIRE(step_all(P("((x) x) (1.y)"), kLinRed).empty());
  // CBN: arguments are never reducible and A_r does not exist.
  REQUIRE(step_all(P("(x) (1.y)"), kAlgRed).empty());
  // Sums and scalar bodies are reducible everywhere; lambda bodies never.
  REQUIRE(has_step(step_all(P("(1.x) + y"), kAlgRed), RuleName::S_one, {0},
                   P("x + y")));
  REQUIRE(has_step(step_all(P("y + 1.x"), kAlgRed), RuleName::S_one, {1},
                   P("y + x")));
  REQUIRE(has_step(step_all(P("2.(1.x)"), kAlgRed), RuleName::S_one, {0},
                   P("2.x")));
  REQUIRE(step_all(P("\\x.(1.y)"), kAlgRed).empty());
  REQUIRE(step_all(Term::zero(), kAlgRed).empty());
  REQUIRE(step_all(Term::zero(), kLinRed).empty());
}

TEST_CASE("no step ever fires under a lambda") {
  std::mt19937_64 rng(23);
  GenOptions opt;
  opt.max_size = 18;
  for (int i = 0; i < 300; ++i) {
    auto t = random_term(rng, opt);
    for (const auto& lang : {kLinRed, kAlgRed, kLinEq, kAlgEq})
      for (const auto& s : step_all(t, lang)) {
        REQUIRE(!passes_under_lambda(t, s.position));
        if (s.rule == RuleName::BetaV)
          REQUIRE(is_base(subterm_at(t, s.position)->child1()));
        if (s.reversed) REQUIRE(!is_beta_rule(s.rule));
      }
  }
}

TEST_CASE("values are stable under the call-by-value rules") {
  std::mt19937_64 rng(29);
  GenOptions opt;
  opt.max_size = 20;
  opt.value_only = true;
  for (int i = 0; i < 400; ++i) {
    auto v = random_term(rng, opt);
    REQUIRE(is_value(v));
    for (const auto& s : step_all(v, kLinRed)) {
      INFO(to_string(v) << " -> " << to_string(s.result));
      REQUIRE(is_value(s.result));
    }
  }
}

TEST_CASE("oriented steps are contained in the symmetric language") {
  std::mt19937_64 rng(31);
  GenOptions opt;
  opt.max_size = 14;
  auto contains = [](const std::vector<StepRecord>& big, const StepRecord& s) {
    return std::any_of(big.begin(), big.end(), [&](const StepRecord& b) {
      return !b.reversed && b.rule == s.rule && b.position == s.position &&
             alpha_equal(b.result, s.result);
    });
  };
  for (int i = 0; i < 200; ++i) {
    auto t = random_term(rng, opt);
    auto lin_eq = step_all(t, kLinEq);
    for (const auto& s : step_all(t, kLinRed)) REQUIRE(contains(lin_eq, s));
    auto alg_eq = step_all(t, kAlgEq);
    for (const auto& s : step_all(t, kAlgRed)) REQUIRE(contains(alg_eq, s));
  }
}

TEST_CASE("reversed steps invert by their forward rule") {
  std::mt19937_64 rng(37);
  GenOptions opt;
  opt.max_size = 12;
  for (int i = 0; i < 150; ++i) {
    auto t = random_term(rng, opt);
    for (const auto& lang : {kLinEq, kAlgEq})
      for (const auto& s : step_all(t, lang)) {
        if (!s.reversed) continue;
        // apply_step revalidates the inversion and throws on mismatch.
        REQUIRE(alpha_equal(apply_step(t, s, lang), s.result));
      }
  }
}

TEST_CASE("reduce: leftmost-outermost golden traces") {
  auto wide = P("(\\x.(x) x) (2.y + 3.z)");
  auto tr = reduce(wide, kLinRed, Strategy::LeftmostOutermost, 100);
  REQUIRE(tr.steps.size() == 5);
  REQUIRE(alpha_equal(tr.end(), P("2.((y) y) + 3.((z) z)")));
  std::vector<RuleName> rules;
  for (const auto& s : tr.steps) rules.push_back(s.rule);
  REQUIRE(rules == std::vector<RuleName>{RuleName::Ar_sum, RuleName::Ar_smul,
                                         RuleName::BetaV, RuleName::Ar_smul,
                                         RuleName::BetaV});

  auto tn = reduce(wide, kAlgRed, Strategy::LeftmostOutermost, 100);
  REQUIRE(alpha_equal(tn.end(),
                      P("2.((y) (2.y + 3.z)) + 3.((z) (2.y + 3.z))")));

  // Normal terms give empty traces in every language.
  for (const auto& lang : {kLinRed, kLinEq, kAlgRed, kAlgEq}) {
    REQUIRE(reduce(P("x"), lang, Strategy::LeftmostOutermost, 10).steps.empty());
    REQUIRE(reduce(P("x"), lang, Strategy::Exhaustive, 10).steps.empty());
  }

  // Replay reproduces the recorded intermediates.
  REQUIRE(alpha_equal(replay(tr, kLinRed), tr.end()));
  auto broken = tr;
  broken.steps[0].rule = RuleName::BetaV;
  REQUIRE_THROWS_AS(replay(broken, kLinRed), Error);
}

TEST_CASE("reduce: fuel exhaustion carries the partial trace") {
  auto wide = P("(\\x.(x) x) (2.y + 3.z)");
  try {
    reduce(wide, kLinRed, Strategy::LeftmostOutermost, 2);
    FAIL("expected FuelExhausted");
  } catch (const FuelExhausted& e) {
    REQUIRE(e.partial.steps.size() == 2);
    REQUIRE(alpha_equal(e.partial.start, wide));
  }
  // Exhaustive mode keeps AC steps (so sums livelock until fuel runs out)
  // and records how many alternatives each step had.
  try {
    reduce(P("1.x + 0"), kAlgRed, Strategy::Exhaustive, 10);
    FAIL("expected FuelExhausted");
  } catch (const FuelExhausted& e) {
    REQUIRE(e.partial.steps.size() == 10);
    REQUIRE(e.partial.steps[0].alternatives == 2);
    REQUIRE(e.partial.steps[0].rule == RuleName::Com);
  }
  auto linear = reduce(P("1.x"), kAlgRed, Strategy::Exhaustive, 10);
  REQUIRE(linear.steps.size() == 1);
  REQUIRE(linear.steps[0].alternatives == 1);
}

TEST_CASE("ac canonical forms and equality") {
  REQUIRE(alpha_equal(ac_canonical(P("(x + y) + x"), CanonLevel::ACOnly),
                      P("x + (x + y)")));
  REQUIRE(alpha_equal(ac_canonical(P("2.x + 3.x"), CanonLevel::ACPlusAlgebraic),
                      P("5.x")));
  REQUIRE(alpha_equal(ac_canonical(P("1.(x + 0)"), CanonLevel::ACPlusAlgebraic),
                      P("x")));
  REQUIRE(ac_equal(P("x + 2.y"), P("2.y + x")));
  REQUIRE(ac_equal(P("(x + y) + z"), P("x + (y + z)")));
  REQUIRE(!ac_equal(P("x"), P("1.x")));
  REQUIRE(!ac_equal(P("x"), P("y")));
  // The AC quotient reaches under binders (it is an equational theory).
  REQUIRE(ac_equal(P("\\x.(x + y)"), P("\\x.(y + x)")));
  // Canonicalization does not linearize applications or touch arguments.
  auto app = P("(x + y) (1.z)");
  REQUIRE(alpha_equal(ac_canonical(app, CanonLevel::ACPlusAlgebraic), app));
}

TEST_CASE("ac canonicalization is idempotent and sound on random terms") {
  std::mt19937_64 rng(41);
  GenOptions opt;
  opt.max_size = 20;
  for (int i = 0; i < 400; ++i) {
    auto t = random_term(rng, opt);
    for (auto level : {CanonLevel::ACOnly, CanonLevel::ACPlusAlgebraic}) {
      auto c = ac_canonical(t, level);
      REQUIRE(alpha_equal(ac_canonical(c, level), c));
    }
    REQUIRE(ac_equal(t, ac_canonical(t, CanonLevel::ACOnly)));
  }
}

TEST_CASE("ac equality is an equivalence on AC-shuffled terms") {
  std::mt19937_64 rng(43);
  GenOptions opt;
  opt.max_size = 18;
  auto shuffle_ac = [&](TermPtr t) {
    for (int k = 0; k < 6; ++k) {
      auto steps = step_all(t, kAlgRed);
      std::erase_if(steps,
                    [](const StepRecord& s) { return !is_ac_rule(s.rule); });
      if (steps.empty()) break;
      t = steps[detail::draw(rng, steps.size())].result;
    }
    return t;
  };
  for (int i = 0; i < 300; ++i) {
    auto a = random_term(rng, opt);
    auto b = shuffle_ac(a);
    auto c = shuffle_ac(b);
    REQUIRE(ac_equal(a, a));
    REQUIRE(ac_equal(a, b));
    REQUIRE(ac_equal(b, a));
    REQUIRE(ac_equal(a, c));
  }
}

TEST_CASE("ac measure: frozen values and step behaviour") {
  REQUIRE(ac_measure(P("x")) == 1);
  REQUIRE(ac_measure(P("\\x.((x) x) x")) == 1);
  REQUIRE(ac_measure(Term::zero()) == 0);
  REQUIRE(ac_measure(P("(x) x")) == 25);
  REQUIRE(ac_measure(P("2.(x + x)")) == 9);
  REQUIRE(ac_measure(P("(x) ((x) x)")) == 385);
  REQUIRE(ac_measure(P("1/2.x")) == 3);  // coefficient does not matter
}

TEST_CASE("ac measure is invariant under AC and drops on algebraic steps") {
  std::mt19937_64 rng(47);
  GenOptions opt;
  opt.max_size = 30;
  for (int i = 0; i < 300; ++i) {
    auto t = random_term(rng, opt);
    auto m = ac_measure(t);
    for (const auto& lang : {kLinRed, kAlgRed})
      for (const auto& s : step_all(t, lang)) {
        if (is_beta_rule(s.rule)) continue;
        auto mu = ac_measure(s.result);
        INFO(to_string(t) << " --" << rule_name_str(s.rule) << "--> "
                          << to_string(s.result));
        if (is_ac_rule(s.rule))
          REQUIRE(mu == m);
        else
          REQUIRE(mu < m);
      }
  }
}

TEST_CASE("ac length counts non-AC algebraic steps") {
  ReductionTrace empty{P("x"), {}};
  REQUIRE(ac_length(empty) == 0);
  auto t = P("2.x + 3.x");
  auto com = step_all(t, kAlgRed);
  ReductionTrace tr{t, {}};
  for (const auto& s : com)
    if (s.rule == RuleName::Com) tr.steps.push_back(s);
  auto after = tr.end();
  for (const auto& s : step_all(after, kAlgRed))
    if (s.rule == RuleName::F_fact) tr.steps.push_back(s);
  REQUIRE(tr.steps.size() == 2);
  REQUIRE(ac_length(tr) == 1);

  ReductionTrace bad{P("(\\x.x) y"), {}};
  bad.steps.push_back(step_all(bad.start, kAlgRed)[0]);
  REQUIRE(bad.steps[0].rule == RuleName::BetaN);
  REQUIRE_THROWS_AS(ac_length(bad), NonAlgebraicStep);
}
