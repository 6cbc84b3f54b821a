#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "alam/parse.hpp"
#include "alam/print.hpp"
#include "alam/rng.hpp"
#include "alam/translate.hpp"

using namespace alam;

namespace {
auto P(const std::string& s) -> TermPtr { return parse(s); }

auto ex1_term() -> TermPtr {
  auto copy = P("\\x.\\y.((y) x) x");
  auto uv = Term::sum(P("\\x.x"), P("\\x.(x) x"));
  return Term::app(copy, uv);
}

auto random_base(std::mt19937_64& rng, std::size_t size) -> TermPtr {
  if (detail::draw(rng, 2) == 0) {
    static const std::vector<std::string> pool = {"x", "y", "z"};
    return Term::var(pool[detail::draw(rng, pool.size())]);
  }
  GenOptions opt;
  opt.max_size = size;
  return Term::lam("b", random_term(rng, opt));
}
}  // namespace

TEST_CASE("cbv-to-cbn encoding goldens") {
  CHECK(alpha_equal(wt(P("0")), P("0")));
  CHECK(alpha_equal(wt(P("x")), P("\\f.(f) x")));
  CHECK(alpha_equal(wt(P("\\x.x")), P("\\f.(f) \\x.\\g.(g) x")));
  CHECK(alpha_equal(wt(P("2.x")), P("\\f.(2.\\g.(g) x) f")));
  CHECK(alpha_equal(wt(P("x + y")),
                    P("\\f.((\\g.(g) x) + \\h.(h) y) f")));
  CHECK(alpha_equal(
      wt(P("(x) y")),
      P("\\f.(\\a.(a) x) \\g.(\\b.(b) y) \\h.((g) h) f")));
  // Encodings of non-zero terms are abstractions, hence base terms.
  CHECK(is_base(wt(P("(x) y + 2.z"))));
}

TEST_CASE("value encoding for the cbv-to-cbn direction") {
  CHECK(alpha_equal(psi(P("x")), P("x")));
  CHECK(alpha_equal(psi(P("0")), P("0")));
  CHECK(alpha_equal(psi(P("2.x + y")), P("2.x + y")));
  CHECK(alpha_equal(psi(P("\\x.(x) x")),
                    Term::lam("x", wt(P("(x) x")))));
  CHECK_THROWS_AS(psi(P("(x) y")), NotAValue);
  CHECK_THROWS_AS(psi(P("x + (x) y")), NotAValue);
}

TEST_CASE("cbn-to-cbv encoding goldens") {
  CHECK(alpha_equal(cps(P("x")), P("x")));
  CHECK(alpha_equal(cps(P("0")), P("\\f.(0) f")));
  CHECK(alpha_equal(cps(P("\\x.x")), P("\\f.(f) \\x.x")));
  CHECK(alpha_equal(cps(P("(x) y")), P("\\f.(x) \\g.((g) y) f")));
  CHECK(alpha_equal(cps(P("2.x")), P("\\f.(2.x) f")));
  CHECK(alpha_equal(cps(P("x + y")), P("\\f.(x + y) f")));
}

TEST_CASE("value encoding for the cbn-to-cbv direction") {
  CHECK(alpha_equal(phi(P("0")), P("0")));
  CHECK(alpha_equal(phi(P("x")), P("(x) \\y.y")));
  CHECK(alpha_equal(phi(P("3.\\x.x")), P("3.\\x.x")));
  CHECK(alpha_equal(phi(P("\\x.(x) y")),
                    Term::lam("x", cps(P("(x) y")))));
  CHECK_THROWS_AS(phi(P("(x) y")), NotAValue);
}

TEST_CASE("continuation composition goldens") {
  auto id = P("\\z.z");
  SECTION("cbv side") {
    CHECK(alpha_equal(colon_v(P("0"), id), P("0")));
    CHECK(alpha_equal(colon_v(P("x"), id), P("(\\z.z) x")));
    CHECK(alpha_equal(colon_v(P("(x) y"), id),
                      P("(\\f.((x) f) \\z.z) y")));
    CHECK(alpha_equal(colon_v(P("2.x"), id),
                      Term::smul(Scalar(2), colon_v(P("x"), id))));
    CHECK(alpha_equal(colon_v(P("x + y"), id),
                      Term::sum(colon_v(P("x"), id), colon_v(P("y"), id))));
    CHECK(alpha_equal(colon_v(P("(0) x"), id), P("0")));
    CHECK(alpha_equal(colon_v(P("(2.x) y"), id),
                      Term::smul(Scalar(2), colon_v(P("(x) y"), id))));
    CHECK(alpha_equal(colon_v(P("(x + y) z"), id),
                      colon_v(P("(x) z + (y) z"), id)));
    CHECK_THROWS_AS(colon_v(P("x"), P("x + y")), KNotBase);
  }
  SECTION("cbn side") {
    CHECK(alpha_equal(colon_n(P("0"), P("\\x.x")), P("0")));
    CHECK(alpha_equal(colon_n(P("(\\y.y) z"), P("\\x.x")),
                      P("((\\y.y) z) \\x.x")));
    CHECK(alpha_equal(colon_n(P("2.x"), id),
                      Term::smul(Scalar(2), colon_n(P("x"), id))));
    CHECK_THROWS_AS(colon_n(P("x"), P("(x) y")), KNotBase);
  }
}

TEST_CASE("translations never capture existing names") {
  std::mt19937_64 rng(4242);
  GenOptions opt;
  opt.max_size = 12;
  for (int i = 0; i < 200; ++i) {
    auto t = random_term(rng, opt);
    CHECK(free_vars(wt(t)) == free_vars(t));
    CHECK(free_vars(cps(t)) == free_vars(t));
  }
}

TEST_CASE("substitution lemmas") {
  std::mt19937_64 rng(31337);
  GenOptions opt;
  opt.max_size = 10;
  SECTION("cbv-to-cbn: base-term substitution commutes with the encoding") {
    for (int i = 0; i < 200; ++i) {
      auto m = random_term(rng, opt);
      auto b = random_base(rng, 6);
      INFO("m=" << to_string(m) << " b=" << to_string(b));
      CHECK(alpha_equal(wt(substitute(m, "x", b)),
                        substitute(wt(m), "x", psi(b))));
    }
  }
  SECTION("cbn-to-cbv: substitution commutes for arbitrary arguments") {
    for (int i = 0; i < 200; ++i) {
      auto m = random_term(rng, opt);
      auto n = random_term(rng, opt);
      INFO("m=" << to_string(m) << " n=" << to_string(n));
      CHECK(alpha_equal(cps(substitute(m, "x", n)),
                        substitute(cps(m), "x", cps(n))));
    }
  }
}

TEST_CASE("cbn-to-cbv encodings are base terms") {
  std::mt19937_64 rng(2718);
  GenOptions opt;
  opt.max_size = 14;
  for (int i = 0; i < 300; ++i) CHECK(is_base(cps(random_term(rng, opt))));
}

TEST_CASE("translated applications reach the continuation composition") {
  std::mt19937_64 rng(1618);
  GenOptions opt;
  opt.max_size = 8;
  SECTION("cbv-to-cbn") {
    for (int i = 0; i < 100; ++i) {
      auto m = random_term(rng, opt);
      auto k = random_base(rng, 4);
      INFO("m=" << to_string(m) << " k=" << to_string(k));
      CHECK(reduces_to(Term::app(wt(m), k), colon_v(m, k), kAlgRed, 500));
    }
  }
  SECTION("cbn-to-cbv on closed terms") {
    GenOptions closed = opt;
    closed.closed = true;
    for (int i = 0; i < 100; ++i) {
      auto m = random_term(rng, closed);
      auto k = Term::lam("k", random_term(rng, closed));
      INFO("m=" << to_string(m) << " k=" << to_string(k));
      CHECK(reduces_to(Term::app(cps(m), k), colon_n(m, k), kLinRed, 500));
    }
  }
}

TEST_CASE("one-step reducts stay reachable through the composition") {
  std::mt19937_64 rng(55);
  GenOptions opt;
  opt.max_size = 8;
  for (int i = 0; i < 60; ++i) {
    auto m = random_term(rng, opt);
    auto rep = check_colon_lemmas(m, P("\\z.z"), Direction::CbvToCbn, 400);
    INFO("m=" << to_string(m));
    CHECK(rep.translation_reaches_colon);
    CHECK(rep.steps_preserved);
  }
}

TEST_CASE("value encodings are reachable from the composition") {
  std::mt19937_64 rng(121);
  auto id = P("\\x.x");
  SECTION("cbv-to-cbn") {
    GenOptions opt;
    opt.max_size = 8;
    opt.value_only = true;
    for (int i = 0; i < 150; ++i) {
      auto v = random_term(rng, opt);
      INFO("v=" << to_string(v));
      CHECK(reduces_to(colon_v(v, id), psi(v), kAlgRed, 500));
    }
  }
  SECTION("cbn-to-cbv on closed values") {
    GenOptions opt;
    opt.max_size = 8;
    opt.value_only = true;
    opt.closed = true;
    for (int i = 0; i < 150; ++i) {
      auto v = random_term(rng, opt);
      INFO("v=" << to_string(v));
      CHECK(reduces_to(colon_n(v, id), phi(v), kLinRed, 500));
    }
  }
}

TEST_CASE("colon lemma report goldens") {
  auto rep = check_colon_lemmas(P("x"), P("\\z.z"), Direction::CbvToCbn, 100);
  CHECK(rep.translation_reaches_colon);
  CHECK(rep.steps_preserved);  // no reducts, vacuously
  REQUIRE(rep.value_encoding);
  CHECK(*rep.value_encoding);

  auto rep2 = check_colon_lemmas(P("1.x"), P("\\z.z"), Direction::CbvToCbn, 100);
  CHECK(rep2.translation_reaches_colon);
  CHECK(rep2.steps_preserved);  // the single reduct 1.x -> x is preserved
  REQUIRE(rep2.value_encoding);  // 1.x is a value (scalar atop a base term)
  CHECK(*rep2.value_encoding);

  auto rep2b = check_colon_lemmas(P("(x) y"), P("\\z.z"), Direction::CbvToCbn, 100);
  CHECK(rep2b.translation_reaches_colon);
  CHECK_FALSE(rep2b.value_encoding.has_value());  // applications are not values

  auto rep3 = check_colon_lemmas(P("0"), P("\\z.z"), Direction::CbnToCbv, 100);
  CHECK(rep3.translation_reaches_colon);
  REQUIRE(rep3.value_encoding);
  CHECK(*rep3.value_encoding);

  CHECK_THROWS_AS(check_colon_lemmas(P("x"), P("x + y"), Direction::CbvToCbn, 10),
                  KNotBase);
}

TEST_CASE("simulation on the flagship example") {
  auto m = ex1_term();
  SECTION("call-by-value source") {
    auto rep = check_simulation(m, Direction::CbvToCbn, 500);
    CHECK(rep.ok);
    auto pair_u = P("\\y.((y) (\\x.x)) \\x.x");
    auto pair_v = P("\\y.((y) (\\x.(x) x)) \\x.(x) x");
    CHECK(ac_equal(rep.source_value, Term::sum(pair_u, pair_v)));
    CHECK(ac_equal(rep.encoded_value,
                   Term::sum(psi(pair_u), psi(pair_v))));
    REQUIRE(rep.indifference_ok);
    CHECK(*rep.indifference_ok);
    CHECK(rep.warning.empty());
    CHECK(ac_equal(replay(rep.target_trace, kAlgRed), rep.encoded_value));
  }
  SECTION("call-by-name source") {
    auto rep = check_simulation(m, Direction::CbnToCbv, 500);
    CHECK(rep.ok);
    auto uv = Term::sum(P("\\x.x"), P("\\x.(x) x"));
    auto expect = Term::lam(
        "y", Term::app(Term::app(Term::var("y"), uv), uv));
    CHECK(ac_equal(rep.source_value, expect));
    CHECK(ac_equal(rep.encoded_value, phi(expect)));
    REQUIRE(rep.indifference_ok);
    CHECK(*rep.indifference_ok);
    CHECK(ac_equal(replay(rep.target_trace, kLinRed), rep.encoded_value));
  }
  SECTION("constructive mode agrees") {
    SimulationOptions o;
    o.mode = SimMode::Constructive;
    CHECK(check_simulation(m, Direction::CbvToCbn, 500, o).ok);
    CHECK(check_simulation(m, Direction::CbnToCbv, 500, o).ok);
  }
  SECTION("symmetric variant with a fragment") {
    SimulationOptions o;
    o.symmetric = true;
    o.fragment = nonneg_fragment();
    auto rep = check_simulation(m, Direction::CbvToCbn, 500, o);
    CHECK(rep.ok);
  }
}

TEST_CASE("simulation edge cases") {
  SECTION("zero program") {
    auto rep = check_simulation(P("0"), Direction::CbvToCbn, 50);
    CHECK(rep.ok);
    CHECK(alpha_equal(rep.source_value, P("0")));
    CHECK(alpha_equal(rep.encoded_value, P("0")));
  }
  SECTION("open source term carries a warning in the cbv direction") {
    auto rep = check_simulation(P("x"), Direction::CbvToCbn, 50);
    CHECK(rep.ok);
    CHECK_FALSE(rep.warning.empty());
  }
  SECTION("the cbn direction requires closed programs") {
    CHECK_THROWS_AS(check_simulation(P("x"), Direction::CbnToCbv, 50),
                    NotClosed);
  }
  SECTION("diverging source raises") {
    auto omega = P("(\\x.(x) x) \\x.(x) x");
    CHECK_THROWS_AS(check_simulation(omega, Direction::CbvToCbn, 50),
                    SourceNotTerminating);
  }
}

TEST_CASE("rule mapping between the two disciplines") {
  using detail::common_rule;
  CHECK(common_rule(RuleName::BetaN, true) == RuleName::BetaV);
  CHECK(common_rule(RuleName::A_app_sum, true) == RuleName::Al_sum);
  CHECK(common_rule(RuleName::Com, true) == RuleName::Com);
  CHECK(common_rule(RuleName::BetaV, false) == RuleName::BetaN);
  CHECK(common_rule(RuleName::Al_smul, false) == RuleName::A_app_smul);
  CHECK_FALSE(common_rule(RuleName::Ar_sum, false));
  CHECK_FALSE(common_rule(RuleName::Ar_zero, false));
  CHECK(common_rule(RuleName::F_fact, false) == RuleName::F_fact);
}

TEST_CASE("random closed programs simulate in both directions") {
  std::mt19937_64 rng(999);
  GenOptions opt;
  opt.max_size = 8;
  opt.closed = true;
  int done = 0;
  for (int i = 0; i < 80; ++i) {
    auto m = random_term(rng, opt);
    for (auto dir : {Direction::CbvToCbn, Direction::CbnToCbv}) {
      try {
        auto rep = check_simulation(m, dir, 400);
        INFO(direction_str(dir) << " on " << to_string(m));
        CHECK(rep.ok);
        if (rep.indifference_ok) CHECK(*rep.indifference_ok);
        ++done;
      } catch (const SourceNotTerminating&) {
        // diverging seeds are skipped, not failures
      } catch (const FuelExhausted&) {
      }
    }
  }
  CHECK(done > 60);
}
