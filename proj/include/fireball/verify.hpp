#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fireball/calculus.hpp"
#include "fireball/machines.hpp"

namespace fireball {

/// Result of running a machine against the right-to-left oracle.
struct LockstepReport {
  Term term = Term::var({});
  MachineKind machine = MachineKind::Easy;
  std::uint64_t transitions = 0;
  std::uint64_t beta_matched = 0;
  std::optional<std::uint64_t> oracle_length;
  Counters counters;
  std::vector<std::string> decode_mismatches;
  std::vector<Violation> invariant_violations;
  std::vector<std::string> bound_violations;
  FinalShape final_shape = FinalShape::Stuck;
  bool fuel_exhausted = false;
  /// Decoding exceeded the budget somewhere; checks fell back to counters.
  bool degraded = false;
  std::vector<std::string> notices;

  bool passed() const;
};

struct LockstepOptions {
  std::uint64_t fuel = 100000;
  std::uint64_t budget = kDefaultDecodeBudget;
  bool check_invariants = true;
};

/// Runs `machine` on `t`, checking every transition against the decoded
/// oracle step: β-transitions must decode to one →rβf step, overhead
/// transitions to the same term.
LockstepReport lockstep(const Term& t, MachineKind machine, NameSupply& supply, const LockstepOptions& options = {});

/// Counter inequalities the machine guarantees for any execution.
std::vector<std::string> audit_bounds(const Counters& counters, const Term& t0, MachineKind machine);
/// Same, plus the free-occurrence inequality at the final state for Easy.
std::vector<std::string> audit_bounds(const RunResult& result, const Term& t0);

enum class Family : std::uint8_t { T, U, SApplied };

const char* to_string(Family f);
std::optional<Family> family_from_string(std::string_view name);
/// Builds the family member; `y` is the free variable of the open families.
Term make_family(Family f, unsigned n, NameSupply& supply, const VarId& y);

struct ExplosionRow {
  Family family;
  unsigned n;
  MachineKind machine;
  std::uint64_t size_t0;
  Counters counters;
  bool fuel_exhausted;
  std::uint64_t state_size;
  /// Exact decoded size; nullopt when above the budget.
  std::optional<std::uint64_t> decoded_size;
};

std::vector<ExplosionRow> explosion_report(Family family, unsigned n_max, const std::vector<MachineKind>& machines,
                                           NameSupply& supply, std::uint64_t fuel = 1000000,
                                           std::uint64_t budget = kDefaultDecodeBudget, unsigned n_min = 1);

inline constexpr const char* kExplosionCsvHeader =
    "family,n,machine,size_t0,beta,subst,commutative,ram_cost,state_size,decoded_size_or_flag";

void write_explosion_csv(std::ostream& out, const std::vector<ExplosionRow>& rows);

// ---------------------------------------------------------------------------
// Corpora

struct RandomTermOptions {
  std::uint64_t max_size = 30;
  /// Names of the free variables; ignored when `closed`.
  std::vector<VarId> free;
  bool closed = false;
};

/// Uniformly chosen size in [1, max_size], then a random shape of that size.
Term random_term(std::mt19937_64& rng, NameSupply& supply, const RandomTermOptions& options);

/// `count` random terms whose right-to-left evaluation ends within
/// `oracle_fuel` steps with results of size at most `max_result_size`.
std::vector<Term> normalizing_corpus(std::uint64_t seed, std::size_t count, NameSupply& supply,
                                     const RandomTermOptions& options, std::uint64_t oracle_fuel = 500,
                                     std::uint64_t max_result_size = 20000);

/// Every term of size at most `max_size` over the given free variables, in
/// order of size. Stops after `cap` terms.
std::vector<Term> enumerate_terms(std::uint64_t max_size, const std::vector<VarId>& free, NameSupply& supply,
                                  std::size_t cap = SIZE_MAX);

/// A random inert term x f1 … fk over `heads`, with fireball arguments.
Term random_inert(std::mt19937_64& rng, NameSupply& supply, const std::vector<VarId>& heads, std::uint64_t max_size);

}  // namespace fireball
