#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fireball/terms.hpp"

namespace fireball {

enum class MachineKind : std::uint8_t { Easy, Fast, Naive };

const char* to_string(MachineKind m);
std::optional<MachineKind> machine_from_string(std::string_view name);

/// Every transition of the three machines. Easy and Naive use C1-C3, M, S;
/// Fast uses C1-C3, B1, B2, S.
enum class Transition : std::uint8_t { C1, C2, C3, M, B1, B2, S };
enum class TransitionClass : std::uint8_t { Beta, Substitution, Commutative };

const char* to_string(Transition t);
TransitionClass classify(Transition t);

class Item;

/// Persistent argument stack; the head is the next argument.
class Stack {
 public:
  Stack() = default;

  bool empty() const { return !cell_; }
  const Item& head() const;
  const Stack& tail() const;
  Stack push(Item item) const;
  std::size_t length() const;

  template <typename F>
  void for_each(F&& f) const {
    for (const Stack* s = this; !s->empty(); s = &s->tail()) f(s->head());
  }

 private:
  struct Cell;
  std::shared_ptr<const Cell> cell_;
};

/// ⟨λx.u, ε⟩ or ⟨x, π⟩.
class Item {
 public:
  static Item abstraction(Code code);
  static Item variable(VarId head, Stack args);

  bool is_abs() const { return abs_.has_value(); }
  /// Only for abstraction items.
  const Code& code() const { return *abs_; }
  /// Only for variable items.
  const VarId& head() const { return head_; }
  const Stack& args() const { return args_; }

 private:
  std::optional<Code> abs_;
  VarId head_;
  Stack args_;
};

struct Stack::Cell {
  Item head;
  Stack tail;
};

struct DumpEntry {
  Code code;
  Stack stack;
};

/// Persistent dump; `top()` is the innermost saved application context.
class Dump {
 public:
  bool empty() const { return !cell_; }
  const DumpEntry& top() const;
  const Dump& pop() const;
  Dump push(DumpEntry entry) const;
  /// Entries from outermost to innermost.
  std::vector<DumpEntry> entries() const;

 private:
  struct Cell;
  std::shared_ptr<const Cell> cell_;
};

struct Dump::Cell {
  DumpEntry entry;
  Dump below;
};

struct Binding {
  VarId var;
  Item item;
};

/// Global environment: an append-at-head list of bindings with an index
/// giving constant-time lookup.
///
/// Environments extended from the same ancestor share storage; a snapshot
/// sees exactly the first `size()` bindings. Extending an environment that
/// is not the newest one of its lineage copies the shared prefix. Not safe
/// to extend concurrently from two threads.
class GlobalEnv {
 public:
  std::size_t size() const { return length_; }
  bool empty() const { return length_ == 0; }

  GlobalEnv bind(VarId x, Item item) const;
  std::optional<Item> lookup(const VarId& x) const;
  /// Position of the binding for `x` (0 = oldest), if bound.
  std::optional<std::size_t> position(const VarId& x) const;
  /// Newest binding for `x` among the `cutoff` oldest ones.
  std::optional<std::size_t> position_before(const VarId& x, std::size_t cutoff) const;
  /// Binding at `pos`, 0 = oldest.
  const Binding& at(std::size_t pos) const;

  /// Newest first.
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = length_; i-- > 0;) f(at(i));
  }

 private:
  struct Storage;
  std::shared_ptr<Storage> storage_;
  std::size_t length_ = 0;
};

std::optional<Item> env_lookup(const GlobalEnv& env, const VarId& x);

struct State {
  Dump dump;
  Code code;
  Stack stack;
  GlobalEnv env;
};

struct Counters {
  std::uint64_t beta = 0;
  std::uint64_t subst = 0;
  std::uint64_t commutative = 0;
  std::map<std::string, std::uint64_t> per_kind;
  std::uint64_t ram_cost = 0;

  std::uint64_t total() const { return beta + subst + commutative; }
  void record(Transition t, std::uint64_t cost);
};

/// A transition taken from some state.
struct StepOutcome {
  Transition kind;
  State next;
  std::uint64_t cost = 1;
};

using Stepper = std::function<std::optional<StepOutcome>(const State&, NameSupply&)>;

struct TraceRow {
  State state;
  std::optional<Transition> next;
};

struct RunResult {
  MachineKind machine;
  Term t0;
  State final_state;
  Counters counters;
  bool fuel_exhausted = false;
  std::vector<TraceRow> trace;
};

/// Initial state on a well-named code α-equivalent to `t`. A term that is
/// already well-named is used as is, so its names show up unchanged.
State compile(const Term& t, NameSupply& supply);

/// Runs `step` from compile(t) for at most `fuel` transitions.
RunResult run_with(MachineKind machine, const Stepper& step, const Term& t, std::uint64_t fuel, bool trace,
                   NameSupply& supply);

// ---------------------------------------------------------------------------
// Decoding

inline constexpr std::uint64_t kDefaultDecodeBudget = std::uint64_t{1} << 22;

/// The decoded term would have `size` nodes, more than the budget allows.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t size, std::uint64_t budget);
  std::uint64_t size() const { return size_; }

 private:
  std::uint64_t size_;
};

Term decode_item(const Item& item);
/// π⟨t⟩: `t` applied to the decoded stack items, head first.
Term plug_stack(Term t, const Stack& stack);
/// Applies the bindings of `env` newest first as capture-avoiding
/// substitutions. Throws BudgetExceeded before building anything too large.
Term unfold(const Term& t, const GlobalEnv& env, NameSupply& supply, std::uint64_t budget = kDefaultDecodeBudget);
Term decode_state(const State& s, NameSupply& supply, std::uint64_t budget = kDefaultDecodeBudget);
/// Exact node count of decode_state(s), saturating; no term is built.
std::uint64_t decoded_size(const State& s);

// ---------------------------------------------------------------------------
// Measures

std::uint64_t free_size(const Item& item);
std::uint64_t free_size(const Stack& stack);
std::uint64_t free_size(const Dump& dump);
std::uint64_t free_size(const State& s);
std::uint64_t commutative_size(const State& s);
/// Total size of every code held by the state, including the environment.
std::uint64_t state_size(const State& s);

// ---------------------------------------------------------------------------
// Invariants

enum class FinalShape : std::uint8_t {
  TopAbstraction,     // (ε, λx.u, ε, E)
  TopFreeHead,        // (ε, x, π, E) with E(x) = ⊥
  TopInertHead,       // (ε, x, π, E) with E(x) = ⟨y, π'⟩
  TopUnappliedBound,  // (ε, x, ε, E) with E(x) an abstraction item
  Stuck,
};

const char* to_string(FinalShape f);
/// Shape of a state no transition applies to; Stuck for any shape the
/// machine should never stop in.
FinalShape final_shape(const State& s, MachineKind machine);

struct Violation {
  std::string invariant;
  std::string detail;
};

/// Skeletons of the abstraction subterms of an initial term.
class SubtermIndex {
 public:
  explicit SubtermIndex(const Term& t0);
  bool contains(const Term& abstraction) const;

 private:
  std::unordered_map<std::uint64_t, std::vector<Term>> by_hash_;
};

struct InvariantOptions {
  /// Also decode the whole state and require success unless the budget
  /// is exceeded.
  bool decode = true;
  std::uint64_t budget = kDefaultDecodeBudget;
};

std::vector<Violation> check_state_invariants(const State& s, const Term& t0, const SubtermIndex& subterms,
                                              const Counters& counters, MachineKind machine,
                                              NameSupply& supply, const InvariantOptions& options = {});

// ---------------------------------------------------------------------------
// Rendering

std::string format_stack(const Stack& stack, Namer& namer);
std::string format_item(const Item& item, Namer& namer);
std::string format_dump(const Dump& dump, Namer& namer);
std::string format_env(const GlobalEnv& env, Namer& namer);
/// `D | code | stack | env | transition`; the last column is empty for a
/// final row.
std::string format_trace_row(const TraceRow& row, Namer& namer);

/// Renames every `'` suffix run in a rendered trace so that, per base name,
/// primes count up in order of first appearance. Makes traces independent
/// of how many names the session drew before.
std::string normalize_primes(const std::string& text);

}  // namespace fireball
