#include <doctest.h>

#include <random>

#include "fireball/calculus.hpp"
#include "fireball/verify.hpp"

using namespace fireball;

TEST_CASE("rtl_step on the running example") {
  NameSupply s;
  Term t = parse("(\\z.z (y z)) \\x.x", s);
  auto one = rtl_step(t, s);
  REQUIRE(one);
  CHECK(one->kind == StepKind::BetaLambda);
  CHECK(print(one->result) == "(\\x.x) (y \\x.x)");
  auto two = rtl_step(one->result, s);
  REQUIRE(two);
  CHECK(two->kind == StepKind::BetaInert);
  CHECK(print(two->result) == "y \\x.x");
  CHECK_FALSE(rtl_step(two->result, s));
}

TEST_CASE("rtl_step is absent exactly on fireballs") {
  NameSupply s;
  CHECK_FALSE(rtl_step(parse("y", s), s));
  CHECK_FALSE(rtl_step(parse("\\x.(\\y.y) x", s), s));
  CHECK_FALSE(rtl_step(parse("y (\\x.x) (z w)", s), s));
  RandomTermOptions r;
  r.free = {s.named("a"), s.named("b")};
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    Term t = random_term(rng, s, r);
    CHECK(rtl_step(t, s).has_value() == !is_fireball(t));
  }
}

TEST_CASE("rtl_step fires the rightmost redex first") {
  NameSupply s;
  Term t = parse("((\\x.x) a) ((\\y.y) b)", s);
  auto st = rtl_step(t, s);
  REQUIRE(st);
  CHECK(print(st->result) == "(\\x.x) a b");
  // A left abstraction is not fired before its argument is a fireball.
  Term u = parse("(\\x.x) ((\\y.y) b)", s);
  CHECK(print(rtl_step(u, s)->result) == "(\\x.x) b");
}

TEST_CASE("evaluate_rtl respects fuel") {
  NameSupply s;
  Term omega = parse("(\\x.x x) (\\x.x x)", s);
  Derivation d = evaluate_rtl(omega, 50, s);
  CHECK(d.exhausted);
  CHECK(d.steps.size() == 50);
  Derivation e = evaluate_rtl(parse("y", s), 10, s);
  CHECK_FALSE(e.exhausted);
  CHECK(e.steps.empty());
}

TEST_CASE("open size explosion on gen_t") {
  NameSupply s;
  VarId y = s.named("y");
  for (unsigned n = 1; n <= 8; ++n) {
    Derivation d = evaluate_rtl(gen_t(n, s, y), 1000, s);
    CHECK(d.steps.size() == n);
    CHECK(d.count(StepKind::BetaInert) == n);
    CHECK(alpha_equal(d.last(), gen_gamma(n, y)));
    CHECK(size(gen_gamma(n, y)) >= (1u << n));
  }
  CHECK(size(gen_t(5, s, y)) == 5 * 5 + 1);
}

TEST_CASE("gen_u takes one step to its reduct") {
  NameSupply s;
  VarId y = s.named("y");
  for (unsigned n = 1; n <= 6; ++n) {
    Derivation d = evaluate_rtl(gen_u(n, s, y), 100, s);
    REQUIRE(d.steps.size() == 1);
    CHECK(d.steps[0].kind == StepKind::BetaLambda);
    CHECK(alpha_equal(d.last(), gen_u_reduct(n, s, y)));
  }
  CHECK_THROWS_AS(gen_u(0, s, y), std::invalid_argument);
}

TEST_CASE("gen_s_applied reduces to r_n in n abstraction steps") {
  NameSupply s;
  for (unsigned n = 1; n <= 8; ++n) {
    Derivation d = evaluate_rtl(gen_s_applied(n, s), 100, s);
    CHECK(d.steps.size() == n);
    CHECK(d.count(StepKind::BetaLambda) == n);
    CHECK(alpha_equal(d.last(), gen_r(n, s)));
  }
}

TEST_CASE("all_one_steps collects every reduct and enforces the cap") {
  NameSupply s;
  Term t = parse("((\\x.x) a) ((\\y.y) b)", s);
  auto steps = all_one_steps(t, s);
  CHECK(steps.size() == 2);
  // Duplicate reducts are merged.
  Term twin = parse("(\\x.x) ((\\y.y) a) ", s);
  CHECK(all_one_steps(twin, s).size() == 1);
  VarId y = s.named("y");
  CHECK_THROWS_AS(all_one_steps(gen_t(3, s, y), s), std::length_error);
}

TEST_CASE("uniform derivation lengths on small examples") {
  NameSupply s;
  Term t = parse("(\\x.x) ((\\y.y) a) ((\\z.z) b)", s);
  DerivationProfile p = explore_derivations(t, s);
  REQUIRE(p.status == DerivationProfile::Status::Normalizing);
  CHECK(p.shapes.size() == 1);
  CHECK(std::get<0>(*p.shapes.begin()) == 3);
  CHECK(p.normal_forms.size() == 1);
  Term omega = parse("(\\x.x x) (\\x.x x)", s);
  CHECK(explore_derivations(omega, s).status == DerivationProfile::Status::Diverging);
}

TEST_CASE("inert substitution commutes with reduction") {
  NameSupply s;
  Term t = parse("(\\z.x z) (x a)", s);
  VarId x = t.left().body().left().var();
  Term i = parse("y \\w.w", s);
  CHECK(check_inert_substitution(t, x, i, s));
  CHECK_THROWS_AS(check_inert_substitution(t, x, parse("\\w.w", s), s), std::invalid_argument);
}

TEST_CASE("abstractions are not inert: substituting one may create redexes") {
  NameSupply s;
  Term t = parse("x a", s);
  VarId x = t.left().var();
  // x a is normal, (λw.w) a is not.
  CHECK(all_one_steps(t, s).empty());
  CHECK(all_one_steps(subst_meta(t, x, parse("\\w.w", s), s), s).size() == 1);
}
