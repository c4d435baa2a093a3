// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "fireball/cli.hpp"
#include "fireball/verify.hpp"

using namespace fireball;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void require(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::vector<std::string> kinds(const RunResult& r) {
  std::vector<std::string> out;
  for (const auto& row : r.trace)
    if (row.next) out.push_back(to_string(*row.next));
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

std::string cli_output(std::vector<std::string> args) {
  args.insert(args.begin(), "fireball");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in;
  std::ostringstream out, err;
  run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

const char* kExample = "(\\z.z (y z)) \\x.x";

// The seeded corpus shared by criteria 3, 6 and 7.
std::vector<Term> corpus(NameSupply& s) {
  RandomTermOptions open;
  open.free = {s.named("a"), s.named("b")};
  auto terms = normalizing_corpus(20170101, 500, s, open);
  RandomTermOptions closed;
  closed.closed = true;
  for (auto& t : normalizing_corpus(20170102, 100, s, closed)) terms.push_back(std::move(t));
  return terms;
}

Outcome golden_trace(MachineKind m, const std::vector<std::string>& expected_kinds, bool tail_only,
                     std::uint64_t subst, const std::string& golden_file) {
  Outcome o;
  auto start = Clock::now();
  NameSupply s;
  std::unordered_map<std::string, VarId> names;
  ParseOptions po;
  po.free_names = &names;
  Term t = parse(kExample, s, po);
  RunResult r = run_machine(m, t, 1000, true, s);
  auto got = kinds(r);
  if (tail_only && got.size() >= expected_kinds.size())
    got.erase(got.begin(), got.end() - static_cast<std::ptrdiff_t>(expected_kinds.size()));
  o.require(got == expected_kinds, "kinds " + join(got));
  o.require(r.counters.beta == 2, "beta " + std::to_string(r.counters.beta));
  o.require(r.counters.subst == subst, "subst " + std::to_string(r.counters.subst));
  o.require(alpha_equal(decode_state(r.final_state, s), parse("y \\x.x", s, po)), "final decode differs");
  std::vector<std::string> args{"trace", kExample, "--golden"};
  if (m == MachineKind::Fast) args.insert(args.end(), {"--machine", "fast"});
  o.require(cli_output(args) == read_file(std::string(FIREBALL_GOLDEN_DIR) + "/" + golden_file),
            "trace output differs from " + golden_file);
  double secs = seconds_since(start);
  o.require(secs < 1.0, "took " + std::to_string(secs) + "s");
  if (o.pass)
    o.detail = std::to_string(r.counters.total()) + " transitions, beta 2, subst " + std::to_string(subst);
  return o;
}

Outcome criterion1() {
  return golden_trace(MachineKind::Easy, {"c1", "c2", "m", "c1", "c1", "s", "c2", "c3", "s", "m"}, false, 2,
                      "ex2_easy.txt");
}

Outcome criterion2() {
  return golden_trace(MachineKind::Fast, {"c3", "c3", "s", "b2"}, true, 1, "ex3_fast.txt");
}

Outcome criterion3() {
  Outcome o;
  auto start = Clock::now();
  NameSupply s;
  auto terms = corpus(s);
  std::size_t checked = 0, failures = 0;
  for (MachineKind m : kAllMachines)
    for (const auto& t : terms) {
      LockstepReport r = lockstep(t, m, s);
      ++checked;
      if (!r.passed()) {
        ++failures;
        o.fail(std::string(to_string(m)) + " fails on " + print(t));
      }
    }
  double secs = seconds_since(start);
  o.require(secs < 30.0, "took " + std::to_string(secs) + "s");
  if (o.pass)
    o.detail = std::to_string(checked) + " machine runs over " + std::to_string(terms.size()) +
               " terms, 0 failures, " + std::to_string(secs).substr(0, 5) + "s";
  else
    o.detail += " (" + std::to_string(failures) + " failures)";
  return o;
}

Outcome criterion4() {
  Outcome o;
  NameSupply s;
  VarId y = s.named("y");
  for (unsigned n = 1; n <= 8; ++n) {
    Derivation d = evaluate_rtl(gen_t(n, s, y), 1000, s);
    o.require(d.steps.size() == n && d.count(StepKind::BetaInert) == n, "oracle steps on t_" + std::to_string(n));
    o.require(alpha_equal(d.last(), gen_gamma(n, y)), "oracle result on t_" + std::to_string(n));
    o.require(size(gen_gamma(n, y)) >= (1u << n), "size of gamma_" + std::to_string(n));
  }
  std::vector<unsigned> ns;
  for (unsigned n = 1; n <= 64; ++n) ns.push_back(n);
  for (unsigned n : {100u, 250u, 500u, 1000u}) ns.push_back(n);
  double worst_ratio = 0;
  for (MachineKind m : {MachineKind::Easy, MachineKind::Fast})
    for (unsigned n : ns) {
      Term t = gen_t(n, s, y);
      RunResult r = run_machine(m, t, 1000000, true, s);
      o.require(!r.fuel_exhausted && r.counters.total() <= 10ull * n,
                std::string(to_string(m)) + " takes " + std::to_string(r.counters.total()) + " transitions on t_" +
                    std::to_string(n));
      std::uint64_t peak = 0;
      for (const auto& row : r.trace) peak = std::max(peak, state_size(row.state));
      worst_ratio = std::max(worst_ratio, static_cast<double>(peak) / n);
      o.require(peak <= 7ull * n + 1, std::string(to_string(m)) + " footprint " + std::to_string(peak) + " on t_" +
                                          std::to_string(n));
    }
  std::vector<std::uint64_t> costs;
  for (unsigned n = 4; n <= 14; ++n) costs.push_back(run_machine(MachineKind::Naive, gen_t(n, s, y), 10000000, false, s).counters.ram_cost);
  for (std::size_t i = 1; i < costs.size(); ++i)
    o.require(costs[i] >= 2 * costs[i - 1], "naive ram_cost does not double at n=" + std::to_string(i + 4));
  if (o.pass)
    o.detail = "oracle exact for n<=8; easy/fast peak footprint <= " + std::to_string(worst_ratio).substr(0, 4) +
               "*n up to n=1000; naive ram_cost " + std::to_string(costs.front()) + " -> " +
               std::to_string(costs.back());
  return o;
}

Outcome criterion5() {
  Outcome o;
  NameSupply s;
  VarId y = s.named("y");
  for (unsigned n = 1; n <= 20; ++n) {
    Term u = gen_u(n, s, y);
    RunResult e = run_machine(MachineKind::Easy, u, 100000, false, s);
    RunResult f = run_machine(MachineKind::Fast, u, 100000, false, s);
    o.require(e.counters.beta == 1 && e.counters.subst == n, "easy on u_" + std::to_string(n));
    o.require(f.counters.beta == 1 && f.counters.subst == 0, "fast on u_" + std::to_string(n));
  }
  if (o.pass) o.detail = "n=1..20: easy beta 1 subst n, fast beta 1 subst 0";
  return o;
}

Outcome criterion6() {
  Outcome o;
  NameSupply s;
  auto terms = corpus(s);
  std::size_t states = 0;
  for (MachineKind m : {MachineKind::Easy, MachineKind::Fast})
    for (const auto& t : terms) {
      RunResult r = run_machine(m, t, 1000000, true, s);
      for (const auto& v : audit_bounds(r, t)) o.fail(std::string(to_string(m)) + ": " + v + " on " + print(t));
      if (m != MachineKind::Easy) continue;
      Counters c;
      for (const auto& row : r.trace) {
        ++states;
        if (free_size(row.state) + c.subst > free_size(t) + size(t) * c.beta)
          o.fail("free-occurrence inequality fails on " + print(t));
        if (row.next) c.record(*row.next, 1);
      }
    }
  if (o.pass)
    o.detail = std::to_string(2 * terms.size()) + " runs, free-occurrence inequality at " +
               std::to_string(states) + " easy states, 0 violations";
  return o;
}

Outcome criterion7() {
  Outcome o;
  NameSupply s;
  auto terms = corpus(s);
  std::size_t states = 0;
  for (MachineKind m : kAllMachines)
    for (const auto& t : terms) {
      RunResult r = run_machine(m, t, 1000000, true, s);
      const Term t0 = r.trace.front().state.code.term();
      SubtermIndex idx(t0);
      Counters c;
      for (const auto& row : r.trace) {
        ++states;
        for (const auto& v : check_state_invariants(row.state, t0, idx, c, m, s))
          o.fail(std::string(to_string(m)) + " " + v.invariant + ": " + v.detail);
        if (row.next) c.record(*row.next, 1);
      }
    }
  if (o.pass) o.detail = std::to_string(states) + " states checked, 0 violations";
  return o;
}

Outcome criterion8() {
  Outcome o;
  NameSupply s;
  auto terms = enumerate_terms(10, {s.named("a"), s.named("b")}, s);
  std::size_t normalizing = 0, diverging = 0, undecided = 0;
  for (const auto& t : terms) {
    DerivationProfile p = explore_derivations(t, s);
    switch (p.status) {
      case DerivationProfile::Status::Normalizing:
        ++normalizing;
        o.require(p.shapes.size() == 1 && p.normal_forms.size() == 1, "non-uniform derivations from " + print(t));
        break;
      case DerivationProfile::Status::Diverging:
        ++diverging;
        o.require(p.normal_forms.empty(), "diverging term with a normal form: " + print(t));
        break;
      case DerivationProfile::Status::TooLarge:
        ++undecided;
        break;
    }
  }
  o.require(normalizing + diverging >= 2000, "fewer than 2000 decided terms");
  if (o.pass)
    o.detail = std::to_string(terms.size()) + " terms: " + std::to_string(normalizing) + " uniform, " +
               std::to_string(diverging) + " diverging, " + std::to_string(undecided) + " over the graph cap";
  return o;
}

Outcome criterion9() {
  Outcome o;
  NameSupply s;
  VarId x = s.named("x");
  RandomTermOptions opts;
  opts.free = {x, s.named("a")};
  opts.max_size = 10;
  std::vector<VarId> heads{s.named("y"), x};
  std::mt19937_64 rng(424242);
  for (int k = 0; k < 200; ++k) {
    Term t = random_term(rng, s, opts);
    Term i = random_inert(rng, s, heads, 6);
    if (!check_inert_substitution(t, x, i, s)) o.fail("fails on t = " + print(t) + ", i = " + print(i));
  }
  if (o.pass) o.detail = "200 triples, both directions";
  return o;
}

Outcome criterion10() {
  Outcome o;
  NameSupply s;
  for (unsigned n = 1; n <= 10; ++n) {
    RunResult r = run_machine(MachineKind::Fast, gen_s_applied(n, s), 100000, false, s);
    o.require(r.counters.beta == n, "beta on s_" + std::to_string(n));
    o.require(decoded_size(r.final_state) >= (1u << n), "decoded size on s_" + std::to_string(n));
  }
  auto start = Clock::now();
  Term t30 = gen_s_applied(30, s);
  RunResult r = run_machine(MachineKind::Fast, t30, 100000, false, s);
  bool exceeded = false;
  try {
    decode_state(r.final_state, s);
  } catch (const BudgetExceeded&) {
    exceeded = true;
  }
  double secs = seconds_since(start);
  o.require(r.counters.beta == 30, "beta on s_30");
  o.require(secs < 1.0, "n=30 took " + std::to_string(secs) + "s");
  o.require(state_size(r.final_state) <= size(t30), "state size " + std::to_string(state_size(r.final_state)));
  o.require(exceeded, "decode of s_30 did not exceed the budget");
  if (o.pass)
    o.detail = "n=30: state size " + std::to_string(state_size(r.final_state)) + ", decoded size " +
               std::to_string(decoded_size(r.final_state)) + " (budget exceeded), " +
               std::to_string(secs * 1000).substr(0, 5) + "ms";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"golden trace, easy", criterion1},
      {"golden trace, fast", criterion2},
      {"beta-matching on the seeded corpus", criterion3},
      {"open size explosion", criterion4},
      {"quadratic vs bilinear witness", criterion5},
      {"counter bounds", criterion6},
      {"invariant suite", criterion7},
      {"uniform derivation lengths", criterion8},
      {"inert substitution", criterion9},
      {"abstraction size explosion", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (o.pass ? "PASS" : "FAIL") << " - "
              << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
