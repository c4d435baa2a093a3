#include <doctest.h>

#include "fireball/machines.hpp"
#include "fireball/verify.hpp"

using namespace fireball;

TEST_CASE("code_of_item reads items back as renamed code") {
  NameSupply s;
  Item id = Item::abstraction(fresh_rename(parse("\\x.x", s), s));
  Code c = code_of_item(id, s);
  CHECK(alpha_equal(c.term(), id.code().term()));
  CHECK(c.term().binder() != id.code().term().binder());
  Item inert = Item::variable(s.named("y"), Stack{}.push(id));
  Code d = code_of_item(inert, s);
  CHECK(alpha_equal(d.term(), decode_item(inert)));
  CHECK(print(d.term()) == "y \\x.x");
}

TEST_CASE("naive substitutes inert items too") {
  NameSupply s;
  Term t = parse("(\\z.z (y z)) \\x.x", s);
  RunResult r = run_naive(t, 100, true, s);
  CHECK(r.counters.beta == 2);
  CHECK(r.counters.subst == 3);
  CHECK(print(decode_state(r.final_state, s)) == "y \\x.x");
}

TEST_CASE("naive copies grow exponentially on gen_t") {
  NameSupply s;
  VarId y = s.named("y");
  std::uint64_t prev = 0;
  for (unsigned n = 4; n <= 14; ++n) {
    RunResult r = run_naive(gen_t(n, s, y), 10000000, false, s);
    CHECK(r.counters.ram_cost >= (std::uint64_t{1} << n));
    if (prev) CHECK(r.counters.ram_cost >= 2 * prev);
    prev = r.counters.ram_cost;
  }
}

TEST_CASE("naive agrees with easy on closed terms") {
  NameSupply s;
  RandomTermOptions o;
  o.closed = true;
  for (const auto& t : normalizing_corpus(4, 150, s, o)) {
    RunResult a = run_naive(t, 100000, false, s);
    RunResult b = run_easy(t, 100000, false, s);
    CHECK(a.counters.beta == b.counters.beta);
    CHECK(alpha_equal(decode_state(a.final_state, s), decode_state(b.final_state, s)));
  }
}

TEST_CASE("naive is still a correct implementation") {
  NameSupply s;
  RandomTermOptions o;
  o.free = {s.named("a"), s.named("b")};
  for (const auto& t : normalizing_corpus(12, 150, s, o)) CHECK(lockstep(t, MachineKind::Naive, s).passed());
}
