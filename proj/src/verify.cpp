#include "fireball/verify.hpp"

#include <map>
#include <ostream>

namespace fireball {

bool LockstepReport::passed() const {
  return decode_mismatches.empty() && invariant_violations.empty() && bound_violations.empty() &&
         final_shape != FinalShape::Stuck && !fuel_exhausted && oracle_length && *oracle_length == counters.beta;
}

namespace {

std::string describe(const Term& t) {
  std::string s = print(t);
  if (s.size() > 200) s = s.substr(0, 200) + "...";
  return s;
}

std::optional<Term> try_decode(const State& s, NameSupply& supply, std::uint64_t budget, LockstepReport& report,
                               std::uint64_t step) {
  try {
    return decode_state(s, supply, budget);
  } catch (const BudgetExceeded& e) {
    if (!report.degraded)
      report.notices.push_back("decode exceeds budget at transition " + std::to_string(step) + " (size " +
                               std::to_string(e.size()) + "); checking counters only");
    report.degraded = true;
    return std::nullopt;
  }
}

}  // namespace

LockstepReport lockstep(const Term& t, MachineKind machine, NameSupply& supply, const LockstepOptions& options) {
  LockstepReport report;
  report.term = t;
  report.machine = machine;

  Stepper step = stepper_for(machine);
  State s = compile(t, supply);
  const Term t0 = s.code.term();
  SubtermIndex subterms(t0);
  InvariantOptions inv{false, options.budget};
  const bool audited = machine != MachineKind::Naive;
  const std::uint64_t n0 = size(t0);

  auto check_state = [&](const State& st, std::uint64_t i) {
    if (!options.check_invariants) return;
    for (auto& v : check_state_invariants(st, t0, subterms, report.counters, machine, supply, inv)) {
      v.detail = "transition " + std::to_string(i) + ": " + v.detail;
      report.invariant_violations.push_back(std::move(v));
    }
  };

  std::optional<Term> decoded = try_decode(s, supply, options.budget, report, 0);
  check_state(s, 0);
  std::optional<Transition> previous;
  std::uint64_t segment_overhead = 0;

  while (true) {
    auto out = step(s, supply);
    if (!out) break;
    if (report.transitions == options.fuel) {
      report.fuel_exhausted = true;
      break;
    }
    const std::uint64_t i = ++report.transitions;
    report.counters.record(out->kind, out->cost);
    const bool is_beta = classify(out->kind) == TransitionClass::Beta;

    std::optional<Term> next = try_decode(out->next, supply, options.budget, report, i);
    if (decoded && next) {
      if (is_beta) {
        auto oracle = rtl_step(*decoded, supply);
        if (!oracle)
          report.decode_mismatches.push_back("transition " + std::to_string(i) + " (" + to_string(out->kind) +
                                             "): decoded term " + describe(*decoded) + " is normal");
        else if (!alpha_equal(oracle->result, *next))
          report.decode_mismatches.push_back("transition " + std::to_string(i) + " (" + to_string(out->kind) +
                                             "): expected " + describe(oracle->result) + ", decoded " +
                                             describe(*next));
        else
          ++report.beta_matched;
      } else if (!alpha_equal(*decoded, *next)) {
        report.decode_mismatches.push_back("transition " + std::to_string(i) + " (" + to_string(out->kind) +
                                           "): decoding changed from " + describe(*decoded) + " to " +
                                           describe(*next));
      }
    }

    if (audited) {
      for (auto& v : audit_bounds(report.counters, t0, machine))
        report.bound_violations.push_back("after transition " + std::to_string(i) + ": " + v);
      if (machine == MachineKind::Fast && previous == Transition::S && !is_beta)
        report.bound_violations.push_back("transition " + std::to_string(i) + ": substitution followed by " +
                                          to_string(out->kind));
      segment_overhead = is_beta ? 0 : segment_overhead + 1;
      const std::uint64_t segment_bound = (2 + report.counters.beta + report.counters.subst) * n0;
      if (segment_overhead > segment_bound)
        report.bound_violations.push_back("transition " + std::to_string(i) + ": " +
                                          std::to_string(segment_overhead) +
                                          " overhead transitions since the last beta, bound " +
                                          std::to_string(segment_bound));
    }

    previous = out->kind;
    s = std::move(out->next);
    decoded = std::move(next);
    check_state(s, i);
  }

  if (machine == MachineKind::Fast && previous == Transition::S && !report.fuel_exhausted)
    report.bound_violations.push_back("run ends on a substitution");
  report.final_shape = final_shape(s, machine);
  if (report.fuel_exhausted) {
    report.final_shape = FinalShape::Stuck;
    report.notices.push_back("machine fuel exhausted after " + std::to_string(options.fuel) + " transitions");
  }

  Derivation oracle = evaluate_rtl(t, options.fuel, supply);
  if (oracle.exhausted)
    report.notices.push_back("oracle fuel exhausted");
  else
    report.oracle_length = oracle.steps.size();

  if (!report.fuel_exhausted) {
    if (report.final_shape == FinalShape::Stuck)
      report.decode_mismatches.push_back("machine stopped in a state of no final shape");
    if (decoded) {
      if (!is_fireball(*decoded))
        report.decode_mismatches.push_back("final state decodes to a non-fireball " + describe(*decoded));
      else if (report.oracle_length && !alpha_equal(*decoded, oracle.last()))
        report.decode_mismatches.push_back("final decode " + describe(*decoded) + " differs from oracle " +
                                           describe(oracle.last()));
    }
  }
  return report;
}

std::vector<std::string> audit_bounds(const Counters& c, const Term& t0, MachineKind machine) {
  std::vector<std::string> out;
  const std::uint64_t n = size(t0);
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) out.push_back(what);
  };
  const std::string counts = " (beta " + std::to_string(c.beta) + ", subst " + std::to_string(c.subst) +
                             ", commutative " + std::to_string(c.commutative) + ", size " + std::to_string(n) + ")";
  switch (machine) {
    case MachineKind::Easy:
      check(c.subst <= (1 + c.beta) * n, "subst > (1+beta)*size" + counts);
      check(c.commutative <= (1 + c.subst) * n, "commutative > (1+subst)*size" + counts);
      break;
    case MachineKind::Fast:
      check(c.subst <= c.beta, "subst > beta" + counts);
      check(c.commutative <= (1 + c.subst) * n, "commutative > (1+subst)*size" + counts);
      break;
    case MachineKind::Naive:
      break;
  }
  return out;
}

std::vector<std::string> audit_bounds(const RunResult& result, const Term& t0) {
  auto out = audit_bounds(result.counters, t0, result.machine);
  if (result.machine == MachineKind::Easy) {
    const std::uint64_t lhs = free_size(result.final_state) + result.counters.subst;
    const std::uint64_t rhs = free_size(t0) + size(t0) * result.counters.beta;
    if (lhs > rhs)
      out.push_back("free size " + std::to_string(free_size(result.final_state)) + " exceeds " +
                    std::to_string(free_size(t0)) + " + size*beta - subst at the final state");
  }
  return out;
}

// ---------------------------------------------------------------------------

const char* to_string(Family f) {
  switch (f) {
    case Family::T:
      return "t";
    case Family::U:
      return "u";
    case Family::SApplied:
      return "s";
  }
  return "?";
}

std::optional<Family> family_from_string(std::string_view name) {
  if (name == "t") return Family::T;
  if (name == "u") return Family::U;
  if (name == "s" || name == "s_applied" || name == "s-applied") return Family::SApplied;
  return std::nullopt;
}

Term make_family(Family f, unsigned n, NameSupply& supply, const VarId& y) {
  switch (f) {
    case Family::T:
      return gen_t(n, supply, y);
    case Family::U:
      return gen_u(n, supply, y);
    case Family::SApplied:
      return gen_s_applied(n, supply);
  }
  return Term::var(y);
}

std::vector<ExplosionRow> explosion_report(Family family, unsigned n_max, const std::vector<MachineKind>& machines,
                                           NameSupply& supply, std::uint64_t fuel, std::uint64_t budget,
                                           unsigned n_min) {
  std::vector<ExplosionRow> rows;
  const VarId y = supply.named("y");
  for (unsigned n = n_min; n <= n_max; ++n) {
    Term t = make_family(family, n, supply, y);
    for (MachineKind m : machines) {
      RunResult r = run_machine(m, t, fuel, false, supply);
      std::uint64_t decoded = decoded_size(r.final_state);
      rows.push_back({family, n, m, size(t), r.counters, r.fuel_exhausted, state_size(r.final_state),
                      decoded <= budget ? std::optional<std::uint64_t>(decoded) : std::nullopt});
    }
  }
  return rows;
}

void write_explosion_csv(std::ostream& out, const std::vector<ExplosionRow>& rows) {
  out << kExplosionCsvHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.family) << ',' << r.n << ',' << to_string(r.machine) << ',' << r.size_t0 << ','
        << r.counters.beta << ',' << r.counters.subst << ',' << r.counters.commutative << ',' << r.counters.ram_cost
        << ',' << r.state_size << ',';
    if (r.decoded_size)
      out << *r.decoded_size;
    else
      out << "budget_exceeded";
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Corpora

namespace {

struct Generator {
  std::mt19937_64& rng;
  NameSupply& supply;
  const std::vector<VarId>& free;

  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  }

  // A term of exactly `n` nodes whose free variables come from `scope`.
  Term term(std::uint64_t n, std::vector<VarId>& scope) {
    const bool no_vars = scope.empty();
    if (n == 1) {
      // Prefer bound variables: free heads mostly yield inert terms.
      std::size_t bound = scope.size() - free.size();
      if (bound > 0 && uniform(0, 3) > 0) return Term::var(scope[free.size() + uniform(0, bound - 1)]);
      return Term::var(scope[uniform(0, scope.size() - 1)]);
    }
    // With no variable in scope every leaf must sit under a fresh binder,
    // so both sides of an application need at least two nodes.
    const bool app_ok = no_vars ? n >= 5 : n >= 3;
    if (app_ok && uniform(0, 9) < 6) {
      std::uint64_t lo = no_vars ? 2 : 1;
      std::uint64_t k = uniform(lo, n - 1 - lo);
      // Bias towards redexes so that most terms actually reduce.
      Term l = k >= 2 && uniform(0, 1) == 0 ? abstraction(k, scope) : term(k, scope);
      return Term::app(l, term(n - 1 - k, scope));
    }
    return abstraction(n, scope);
  }

  Term abstraction(std::uint64_t n, std::vector<VarId>& scope) {
    static constexpr std::string_view bases[] = {"x", "z", "w", "v"};
    VarId x = supply.fresh(bases[uniform(0, 3)]);
    scope.push_back(x);
    Term body = term(n - 1, scope);
    scope.pop_back();
    return Term::abs(x, body);
  }
};

}  // namespace

Term random_term(std::mt19937_64& rng, NameSupply& supply, const RandomTermOptions& options) {
  static const std::vector<VarId> none;
  const std::vector<VarId>& free = options.closed ? none : options.free;
  Generator g{rng, supply, free};
  std::uint64_t n = g.uniform(1, std::max<std::uint64_t>(1, options.max_size));
  if (free.empty() && n == 1) n = 2;
  std::vector<VarId> scope = free;
  return g.term(n, scope);
}

std::vector<Term> normalizing_corpus(std::uint64_t seed, std::size_t count, NameSupply& supply,
                                     const RandomTermOptions& options, std::uint64_t oracle_fuel,
                                     std::uint64_t max_result_size) {
  std::mt19937_64 rng(seed);
  std::vector<Term> out;
  while (out.size() < count) {
    Term t = random_term(rng, supply, options);
    Derivation d = evaluate_rtl(t, oracle_fuel, supply);
    if (d.exhausted) continue;
    // Results may share subterms; bound the tree size without expanding it.
    bool small = true;
    std::uint64_t seen = 0;
    std::vector<const Term*> todo{&d.last()};
    while (!todo.empty() && small) {
      const Term* u = todo.back();
      todo.pop_back();
      if (++seen > max_result_size) small = false;
      if (u->is_abs()) todo.push_back(&u->body());
      if (u->is_app()) {
        todo.push_back(&u->left());
        todo.push_back(&u->right());
      }
    }
    if (small) out.push_back(std::move(t));
  }
  return out;
}

std::vector<Term> enumerate_terms(std::uint64_t max_size, const std::vector<VarId>& free, NameSupply& supply,
                                  std::size_t cap) {
  // Terms of size n under d binders depend only on (n, d); binders at
  // depth d all use the same variable, compile renames them apart.
  std::vector<VarId> binders;
  std::map<std::pair<std::uint64_t, std::size_t>, std::vector<Term>> memo;
  std::function<const std::vector<Term>&(std::uint64_t, std::size_t)> terms =
      [&](std::uint64_t n, std::size_t depth) -> const std::vector<Term>& {
    auto key = std::make_pair(n, depth);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    while (binders.size() <= depth) binders.push_back(supply.fresh("x"));
    std::vector<Term> out;
    if (n == 1) {
      for (const auto& v : free) out.push_back(Term::var(v));
      for (std::size_t i = 0; i < depth; ++i) out.push_back(Term::var(binders[i]));
    } else {
      for (const auto& b : terms(n - 1, depth + 1)) out.push_back(Term::abs(binders[depth], b));
      for (std::uint64_t k = 1; k + 1 < n; ++k) {
        const auto& ls = terms(k, depth);
        const auto& rs = terms(n - 1 - k, depth);
        for (const auto& l : ls)
          for (const auto& r : rs) out.push_back(Term::app(l, r));
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };

  std::vector<Term> out;
  for (std::uint64_t n = 1; n <= max_size && out.size() < cap; ++n)
    for (const auto& t : terms(n, 0)) {
      if (out.size() >= cap) break;
      out.push_back(t);
    }
  return out;
}

Term random_inert(std::mt19937_64& rng, NameSupply& supply, const std::vector<VarId>& heads,
                  std::uint64_t max_size) {
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };
  Term t = Term::var(heads[pick(0, heads.size() - 1)]);
  std::uint64_t used = 1;
  const std::uint64_t args = pick(0, 3);
  for (std::uint64_t i = 0; i < args && used + 3 <= max_size; ++i) {
    std::uint64_t room = max_size - used - 1;
    Term arg = Term::var(heads[0]);
    if (pick(0, 1) == 0) {
      arg = random_inert(rng, supply, heads, std::min<std::uint64_t>(room, 5));
    } else {
      std::uint64_t body_size = pick(1, std::max<std::uint64_t>(1, std::min<std::uint64_t>(room - 1, 5)));
      VarId x = supply.fresh("w");
      std::vector<VarId> scope = heads;
      scope.push_back(x);
      Generator g{rng, supply, heads};
      arg = Term::abs(x, g.term(body_size, scope));
    }
    used += 1 + size(arg);
    t = Term::app(t, arg);
  }
  return t;
}

}  // namespace fireball
