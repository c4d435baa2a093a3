#include "fireball/machine.hpp"

#include <deque>
#include <limits>
#include <regex>
#include <sstream>
#include <unordered_map>

namespace fireball {

const char* to_string(MachineKind m) {
  switch (m) {
    case MachineKind::Easy:
      return "easy";
    case MachineKind::Fast:
      return "fast";
    case MachineKind::Naive:
      return "naive";
  }
  return "?";
}

std::optional<MachineKind> machine_from_string(std::string_view name) {
  if (name == "easy") return MachineKind::Easy;
  if (name == "fast") return MachineKind::Fast;
  if (name == "naive") return MachineKind::Naive;
  return std::nullopt;
}

const char* to_string(Transition t) {
  switch (t) {
    case Transition::C1:
      return "c1";
    case Transition::C2:
      return "c2";
    case Transition::C3:
      return "c3";
    case Transition::M:
      return "m";
    case Transition::B1:
      return "b1";
    case Transition::B2:
      return "b2";
    case Transition::S:
      return "s";
  }
  return "?";
}

TransitionClass classify(Transition t) {
  switch (t) {
    case Transition::M:
    case Transition::B1:
    case Transition::B2:
      return TransitionClass::Beta;
    case Transition::S:
      return TransitionClass::Substitution;
    default:
      return TransitionClass::Commutative;
  }
}

// ---------------------------------------------------------------------------
// Data structures

const Item& Stack::head() const { return cell_->head; }
const Stack& Stack::tail() const { return cell_->tail; }

Stack Stack::push(Item item) const {
  Stack s;
  s.cell_ = std::make_shared<const Cell>(Cell{std::move(item), *this});
  return s;
}

std::size_t Stack::length() const {
  std::size_t n = 0;
  for_each([&](const Item&) { ++n; });
  return n;
}

Item Item::abstraction(Code code) {
  if (!code.term().is_abs()) throw std::invalid_argument("abstraction item needs an abstraction code");
  Item i;
  i.abs_ = std::move(code);
  return i;
}

Item Item::variable(VarId head, Stack args) {
  Item i;
  i.head_ = head;
  i.args_ = std::move(args);
  return i;
}

const DumpEntry& Dump::top() const { return cell_->entry; }
const Dump& Dump::pop() const { return cell_->below; }

Dump Dump::push(DumpEntry entry) const {
  Dump d;
  d.cell_ = std::make_shared<const Cell>(Cell{std::move(entry), *this});
  return d;
}

std::vector<DumpEntry> Dump::entries() const {
  std::vector<DumpEntry> out;
  for (const Dump* d = this; !d->empty(); d = &d->pop()) out.push_back(d->top());
  return {out.rbegin(), out.rend()};
}

struct GlobalEnv::Storage {
  std::deque<Binding> bindings;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> index;
};

GlobalEnv GlobalEnv::bind(VarId x, Item item) const {
  GlobalEnv out;
  if (storage_ && storage_->bindings.size() == length_) {
    out.storage_ = storage_;
  } else {
    out.storage_ = std::make_shared<Storage>();
    for (std::size_t i = 0; i < length_; ++i) {
      out.storage_->bindings.push_back(storage_->bindings[i]);
      out.storage_->index[storage_->bindings[i].var.id].push_back(i);
    }
  }
  out.storage_->index[x.id].push_back(length_);
  out.storage_->bindings.push_back(Binding{x, std::move(item)});
  out.length_ = length_ + 1;
  return out;
}

std::optional<std::size_t> GlobalEnv::position(const VarId& x) const { return position_before(x, length_); }

std::optional<std::size_t> GlobalEnv::position_before(const VarId& x, std::size_t cutoff) const {
  if (!storage_) return std::nullopt;
  auto it = storage_->index.find(x.id);
  if (it == storage_->index.end()) return std::nullopt;
  for (auto p = it->second.rbegin(); p != it->second.rend(); ++p)
    if (*p < cutoff && *p < length_) return *p;
  return std::nullopt;
}

std::optional<Item> GlobalEnv::lookup(const VarId& x) const {
  auto pos = position(x);
  if (!pos) return std::nullopt;
  return storage_->bindings[*pos].item;
}

const Binding& GlobalEnv::at(std::size_t pos) const { return storage_->bindings.at(pos); }

std::optional<Item> env_lookup(const GlobalEnv& env, const VarId& x) { return env.lookup(x); }

void Counters::record(Transition t, std::uint64_t cost) {
  switch (classify(t)) {
    case TransitionClass::Beta:
      ++beta;
      break;
    case TransitionClass::Substitution:
      ++subst;
      break;
    case TransitionClass::Commutative:
      ++commutative;
      break;
  }
  ++per_kind[to_string(t)];
  ram_cost += cost;
}

State compile(const Term& t, NameSupply& supply) {
  Code code = is_well_named(t) ? Code::trusted(t) : fresh_rename(t, supply);
  return State{Dump{}, std::move(code), Stack{}, GlobalEnv{}};
}

RunResult run_with(MachineKind machine, const Stepper& step, const Term& t, std::uint64_t fuel, bool trace,
                   NameSupply& supply) {
  RunResult result{machine, t, compile(t, supply), {}, false, {}};
  for (std::uint64_t i = 0;; ++i) {
    auto out = step(result.final_state, supply);
    if (!out) break;
    if (i == fuel) {
      result.fuel_exhausted = true;
      break;
    }
    if (trace) result.trace.push_back({result.final_state, out->kind});
    result.counters.record(out->kind, out->cost);
    result.final_state = std::move(out->next);
  }
  if (trace) result.trace.push_back({result.final_state, std::nullopt});
  return result;
}

// ---------------------------------------------------------------------------
// Decoding

BudgetExceeded::BudgetExceeded(std::uint64_t size, std::uint64_t budget)
    : std::runtime_error("decoded term has at least " + std::to_string(size) + " nodes, budget is " +
                         std::to_string(budget)),
      size_(size) {}

Term plug_stack(Term t, const Stack& stack) {
  stack.for_each([&](const Item& item) { t = Term::app(t, decode_item(item)); });
  return t;
}

Term decode_item(const Item& item) {
  if (item.is_abs()) return item.code().term();
  return plug_stack(Term::var(item.head()), item.args());
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

Term plug_state(const State& s) {
  Term t = plug_stack(s.code.term(), s.stack);
  for (const Dump* d = &s.dump; !d->empty(); d = &d->pop())
    t = plug_stack(Term::app(d->top().code.term(), t), d->top().stack);
  return t;
}

// Simultaneous realization of the newest-first substitution sequence: an
// occurrence of a variable bound at position p is replaced by the decoded
// item unfolded by the bindings older than p.
class Unfolder {
 public:
  explicit Unfolder(const GlobalEnv& env) : env_(env), sizes_(env.size()), built_(env.size()), fvs_(env.size()) {}

  std::uint64_t size_of(const Term& t, std::size_t cutoff) {
    std::unordered_map<std::uint64_t, int> scope;
    return size_rec(t, cutoff, scope);
  }

  // Returns nullopt when a capture would occur.
  std::optional<Term> build(const Term& t, std::size_t cutoff) {
    std::unordered_map<std::uint64_t, int> scope;
    captured_ = false;
    Term out = build_rec(t, cutoff, scope);
    if (captured_) return std::nullopt;
    return out;
  }

 private:
  const Term& decoded(std::size_t pos) {
    if (auto it = decoded_.find(pos); it != decoded_.end()) return it->second;
    return decoded_.emplace(pos, decode_item(env_.at(pos).item)).first->second;
  }

  std::optional<std::size_t> visible(const VarId& x, std::size_t cutoff,
                                     const std::unordered_map<std::uint64_t, int>& scope) const {
    if (scope.count(x.id)) return std::nullopt;
    return env_.position_before(x, cutoff);
  }

  std::uint64_t item_size(std::size_t pos) {
    if (!sizes_[pos]) sizes_[pos] = size_of(decoded(pos), pos);
    return *sizes_[pos];
  }

  std::uint64_t size_rec(const Term& t, std::size_t cutoff, std::unordered_map<std::uint64_t, int>& scope) {
    switch (t.kind()) {
      case TermKind::Var: {
        auto pos = visible(t.var(), cutoff, scope);
        return pos ? item_size(*pos) : 1;
      }
      case TermKind::Abs: {
        ++scope[t.binder().id];
        std::uint64_t n = sat_add(1, size_rec(t.body(), cutoff, scope));
        if (--scope[t.binder().id] == 0) scope.erase(t.binder().id);
        return n;
      }
      case TermKind::App:
        return sat_add(1, sat_add(size_rec(t.left(), cutoff, scope), size_rec(t.right(), cutoff, scope)));
    }
    return 0;
  }

  const VarSet& item_free(std::size_t pos) {
    if (!fvs_[pos]) {
      VarSet out;
      for (const auto& v : free_vars(decoded(pos))) {
        if (auto p = env_.position_before(v, pos)) {
          const VarSet& inner = item_free(*p);
          out.insert(inner.begin(), inner.end());
        } else {
          out.insert(v);
        }
      }
      fvs_[pos] = std::move(out);
    }
    return *fvs_[pos];
  }

  const Term& item_term(std::size_t pos) {
    if (!built_[pos]) {
      std::unordered_map<std::uint64_t, int> scope;
      built_[pos] = build_rec(decoded(pos), pos, scope);
    }
    return *built_[pos];
  }

  Term build_rec(const Term& t, std::size_t cutoff, std::unordered_map<std::uint64_t, int>& scope) {
    switch (t.kind()) {
      case TermKind::Var: {
        auto pos = visible(t.var(), cutoff, scope);
        if (!pos) return t;
        if (!scope.empty())
          for (const auto& v : item_free(*pos))
            if (scope.count(v.id)) captured_ = true;
        return item_term(*pos);
      }
      case TermKind::Abs: {
        ++scope[t.binder().id];
        Term body = build_rec(t.body(), cutoff, scope);
        if (--scope[t.binder().id] == 0) scope.erase(t.binder().id);
        return body.same_node(t.body()) ? t : Term::abs(t.binder(), body);
      }
      case TermKind::App: {
        Term l = build_rec(t.left(), cutoff, scope);
        Term r = build_rec(t.right(), cutoff, scope);
        return l.same_node(t.left()) && r.same_node(t.right()) ? t : Term::app(l, r);
      }
    }
    return t;
  }

  const GlobalEnv& env_;
  std::unordered_map<std::size_t, Term> decoded_;
  std::vector<std::optional<std::uint64_t>> sizes_;
  std::vector<std::optional<Term>> built_;
  std::vector<std::optional<VarSet>> fvs_;
  bool captured_ = false;
};

}  // namespace

Term unfold(const Term& t, const GlobalEnv& env, NameSupply& supply, std::uint64_t budget) {
  if (env.empty()) {
    std::uint64_t n = size(t);
    if (n > budget) throw BudgetExceeded(n, budget);
    return t;
  }
  Unfolder unfolder(env);
  std::uint64_t n = unfolder.size_of(t, env.size());
  if (n > budget) throw BudgetExceeded(n, budget);
  if (auto out = unfolder.build(t, env.size())) return *out;
  // Some binder would capture a substituted variable: apply the bindings
  // one at a time with renaming.
  Term out = t;
  env.for_each([&](const Binding& b) { out = subst_meta(out, b.var, decode_item(b.item), supply); });
  return out;
}

Term decode_state(const State& s, NameSupply& supply, std::uint64_t budget) {
  return unfold(plug_state(s), s.env, supply, budget);
}

std::uint64_t decoded_size(const State& s) {
  Term pre = plug_state(s);
  if (s.env.empty()) return size(pre);
  return Unfolder(s.env).size_of(pre, s.env.size());
}

// ---------------------------------------------------------------------------
// Measures

std::uint64_t free_size(const Item& item) { return item.is_abs() ? 0 : 1 + free_size(item.args()); }

std::uint64_t free_size(const Stack& stack) {
  std::uint64_t n = 0;
  stack.for_each([&](const Item& i) { n += free_size(i); });
  return n;
}

std::uint64_t free_size(const Dump& dump) {
  std::uint64_t n = 0;
  for (const Dump* d = &dump; !d->empty(); d = &d->pop())
    n += free_size(d->top().code.term()) + free_size(d->top().stack);
  return n;
}

std::uint64_t free_size(const State& s) { return free_size(s.dump) + free_size(s.code.term()) + free_size(s.stack); }

std::uint64_t commutative_size(const State& s) {
  std::uint64_t n = size(s.code.term());
  for (const Dump* d = &s.dump; !d->empty(); d = &d->pop()) n += size(d->top().code.term());
  return n;
}

namespace {

std::uint64_t item_footprint(const Item& item);

std::uint64_t stack_footprint(const Stack& stack) {
  std::uint64_t n = 0;
  stack.for_each([&](const Item& i) { n += item_footprint(i); });
  return n;
}

std::uint64_t item_footprint(const Item& item) {
  return item.is_abs() ? size(item.code().term()) : 1 + stack_footprint(item.args());
}

}  // namespace

std::uint64_t state_size(const State& s) {
  std::uint64_t n = size(s.code.term()) + stack_footprint(s.stack);
  for (const Dump* d = &s.dump; !d->empty(); d = &d->pop())
    n += size(d->top().code.term()) + stack_footprint(d->top().stack);
  s.env.for_each([&](const Binding& b) { n += 1 + item_footprint(b.item); });
  return n;
}

// ---------------------------------------------------------------------------
// Invariants

const char* to_string(FinalShape f) {
  switch (f) {
    case FinalShape::TopAbstraction:
      return "top-abstraction";
    case FinalShape::TopFreeHead:
      return "top-free-head";
    case FinalShape::TopInertHead:
      return "top-inert-head";
    case FinalShape::TopUnappliedBound:
      return "top-unapplied-bound";
    case FinalShape::Stuck:
      return "stuck";
  }
  return "?";
}

FinalShape final_shape(const State& s, MachineKind machine) {
  if (!s.dump.empty()) return FinalShape::Stuck;
  const Term& c = s.code.term();
  if (c.is_abs()) return s.stack.empty() ? FinalShape::TopAbstraction : FinalShape::Stuck;
  if (!c.is_var()) return FinalShape::Stuck;
  auto bound = s.env.lookup(c.var());
  if (!bound) return FinalShape::TopFreeHead;
  if (!bound->is_abs()) return machine == MachineKind::Naive ? FinalShape::Stuck : FinalShape::TopInertHead;
  if (machine == MachineKind::Fast && s.stack.empty()) return FinalShape::TopUnappliedBound;
  return FinalShape::Stuck;
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h * 0xff51afd7ed558ccdULL;
}

// Bottom-up skeleton hash; `on_abs` sees every abstraction node with its hash.
template <typename F>
std::uint64_t skeleton_hash(const Term& t, F&& on_abs) {
  switch (t.kind()) {
    case TermKind::Var:
      return 0x51;
    case TermKind::Abs: {
      std::uint64_t h = mix(0xab, skeleton_hash(t.body(), on_abs));
      on_abs(t, h);
      return h;
    }
    case TermKind::App: {
      std::uint64_t l = skeleton_hash(t.left(), on_abs);
      return mix(mix(0xa9, l), skeleton_hash(t.right(), on_abs));
    }
  }
  return 0;
}

}  // namespace

SubtermIndex::SubtermIndex(const Term& t0) {
  skeleton_hash(t0, [&](const Term& abs, std::uint64_t h) {
    auto& bucket = by_hash_[h];
    for (const auto& existing : bucket)
      if (skeleton_equal(existing, abs)) return;
    bucket.push_back(abs);
  });
}

bool SubtermIndex::contains(const Term& abstraction) const {
  std::uint64_t h = skeleton_hash(abstraction, [](const Term&, std::uint64_t) {});
  auto it = by_hash_.find(h);
  if (it == by_hash_.end()) return false;
  for (const auto& candidate : it->second)
    if (skeleton_equal(candidate, abstraction)) return true;
  return false;
}

namespace {

class InvariantChecker {
 public:
  InvariantChecker(const State& s, const SubtermIndex& subterms, MachineKind machine, Namer& namer)
      : s_(s), subterms_(subterms), machine_(machine), namer_(namer) {}

  std::vector<Violation> out;

  // Name invariants.
  void check_names() {
    std::unordered_map<std::uint64_t, int> binder_count;
    VarSet free_occ;
    for_each_code([&](const Term& t) { scan_code(t, binder_count, free_occ); });
    for_each_item([&](const Item& i) {
      if (!i.is_abs()) free_occ.insert(i.head());
    });
    VarSet env_vars;
    s_.env.for_each([&](const Binding& b) { env_vars.insert(b.var); });
    for (const auto& [id, count] : binder_count) {
      VarId v{id, {}, 0};
      if (count > 1) add("name/abstraction", "binder bound " + std::to_string(count) + " times");
      if (free_occ.count(v)) add("name/abstraction", "binder occurs outside its abstraction");
      if (env_vars.count(v)) add("name/abstraction", "binder is also bound in the environment");
    }
    // Explicit substitutions: x fresh wrt its item and every older binding.
    VarSet older;
    for (std::size_t p = 0; p < s_.env.size(); ++p) {
      const Binding& b = s_.env.at(p);
      VarSet here;
      collect_item_ids(b.item, here);
      if (older.count(b.var) || here.count(b.var))
        add("name/explicit-substitution", "[" + namer_.name(b.var) + "<-...] is not fresh");
      older.insert(here.begin(), here.end());
      older.insert(b.var);
    }
  }

  void check_fireball_items() {
    auto check = [&](const Item& item, bool in_context) {
      FireballClass raw = classify(decode_item(item));
      FireballClass unfolded = unfolded_class(item);
      FireballClass expected = expected_class(item);
      if (raw == FireballClass::NotFireball || unfolded != expected)
        add("fireball-item", format_item(item, namer_) + " does not decode to " +
                                 (expected == FireballClass::Inert ? "an inert term" : "an abstraction"));
      if (in_context && unfolded == FireballClass::NotFireball)
        add("contextual-decoding", "argument " + format_item(item, namer_) + " is not a fireball");
    };
    std::function<void(const Item&, bool)> walk = [&](const Item& item, bool ctx) {
      check(item, ctx);
      if (!item.is_abs()) item.args().for_each([&](const Item& i) { walk(i, false); });
    };
    s_.stack.for_each([&](const Item& i) { walk(i, true); });
    for (const Dump* d = &s_.dump; !d->empty(); d = &d->pop())
      d->top().stack.for_each([&](const Item& i) { walk(i, true); });
    s_.env.for_each([&](const Binding& b) { walk(b.item, false); });
  }

  void check_subterms() {
    for_each_code([&](const Term& t) {
      skeleton_hash(t, [&](const Term& abs, std::uint64_t) {
        if (!subterms_.contains(abs)) add("subterm", print(abs, namer_) + " is not a subterm of the initial term");
      });
    });
  }

  void add(std::string invariant, std::string detail) { out.push_back({std::move(invariant), std::move(detail)}); }

 private:
  template <typename F>
  void for_each_item(F&& f) {
    std::function<void(const Item&)> walk = [&](const Item& item) {
      f(item);
      if (!item.is_abs()) item.args().for_each(walk);
    };
    s_.stack.for_each(walk);
    for (const Dump* d = &s_.dump; !d->empty(); d = &d->pop()) d->top().stack.for_each(walk);
    s_.env.for_each([&](const Binding& b) { walk(b.item); });
  }

  template <typename F>
  void for_each_code(F&& f) {
    f(s_.code.term());
    for (const Dump* d = &s_.dump; !d->empty(); d = &d->pop()) f(d->top().code.term());
    for_each_item([&](const Item& i) {
      if (i.is_abs()) f(i.code().term());
    });
  }

  static void scan_code(const Term& t, std::unordered_map<std::uint64_t, int>& binders, VarSet& free_occ) {
    VarSet fv = free_vars(t);
    free_occ.insert(fv.begin(), fv.end());
    for_each_subterm(t, [&](const Term& sub) {
      if (sub.is_abs()) ++binders[sub.binder().id];
    });
  }

  static void collect_item_ids(const Item& item, VarSet& out) {
    if (item.is_abs()) {
      for_each_subterm(item.code().term(), [&](const Term& sub) {
        if (!sub.is_app()) out.insert(sub.var());
      });
      return;
    }
    out.insert(item.head());
    item.args().for_each([&](const Item& i) { collect_item_ids(i, out); });
  }

  // Class of the unfolded decoding, computed structurally: an inert head
  // applied to fireballs is inert, an abstraction applied to anything is not
  // a fireball.
  FireballClass unfolded_class(const Item& item, int depth = 0) {
    if (item.is_abs()) return FireballClass::Abstraction;
    bool args_ok = true;
    item.args().for_each([&](const Item& i) {
      if (unfolded_class(i, depth) == FireballClass::NotFireball) args_ok = false;
    });
    if (!args_ok) return FireballClass::NotFireball;
    auto bound = s_.env.lookup(item.head());
    if (!bound) return FireballClass::Inert;
    if (bound->is_abs()) return item.args().empty() ? FireballClass::Abstraction : FireballClass::NotFireball;
    if (depth > static_cast<int>(s_.env.size())) return FireballClass::NotFireball;  // cyclic environment
    return unfolded_class(*bound, depth + 1) == FireballClass::Inert ? FireballClass::Inert
                                                                      : FireballClass::NotFireball;
  }

  FireballClass expected_class(const Item& item) const {
    if (item.is_abs()) return FireballClass::Abstraction;
    if (machine_ != MachineKind::Fast) return FireballClass::Inert;
    auto bound = s_.env.lookup(item.head());
    return bound && bound->is_abs() ? FireballClass::Abstraction : FireballClass::Inert;
  }

  const State& s_;
  const SubtermIndex& subterms_;
  MachineKind machine_;
  Namer& namer_;
};

}  // namespace

std::vector<Violation> check_state_invariants(const State& s, const Term& t0, const SubtermIndex& subterms,
                                              const Counters& counters, MachineKind machine, NameSupply& supply,
                                              const InvariantOptions& options) {
  Namer namer;
  InvariantChecker checker(s, subterms, machine, namer);
  checker.check_names();
  checker.check_fireball_items();
  if (machine != MachineKind::Naive) checker.check_subterms();
  if (machine == MachineKind::Easy) {
    long double lhs = static_cast<long double>(free_size(s));
    long double rhs = static_cast<long double>(free_size(t0)) +
                      static_cast<long double>(size(t0)) * static_cast<long double>(counters.beta) -
                      static_cast<long double>(counters.subst);
    if (lhs > rhs)
      checker.add("free-occurrences", "free size " + std::to_string(free_size(s)) + " exceeds bound " +
                                          std::to_string(static_cast<long long>(rhs)));
  }
  if (options.decode) {
    try {
      decode_state(s, supply, options.budget);
    } catch (const BudgetExceeded&) {
      // Explosive instance; nothing to check.
    } catch (const std::exception& e) {
      checker.add("contextual-decoding", std::string("decoding failed: ") + e.what());
    }
  }
  return std::move(checker.out);
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

constexpr const char* kEmpty = "\xCE\xB5";  // ε

std::string join_stack(const Stack& stack, Namer& namer) {
  if (stack.empty()) return kEmpty;
  std::string out;
  bool first = true;
  stack.for_each([&](const Item& i) {
    if (!first) out += ':';
    first = false;
    out += format_item(i, namer);
  });
  return out;
}

}  // namespace

std::string format_stack(const Stack& stack, Namer& namer) { return join_stack(stack, namer); }

std::string format_item(const Item& item, Namer& namer) {
  if (item.is_abs()) return "<" + print(item.code().term(), namer) + "," + kEmpty + ">";
  std::string args = item.args().empty() ? std::string(kEmpty) : "(" + join_stack(item.args(), namer) + ")";
  return "<" + namer.name(item.head()) + "," + args + ">";
}

std::string format_dump(const Dump& dump, Namer& namer) {
  if (dump.empty()) return kEmpty;
  std::string out;
  bool first = true;
  for (const auto& e : dump.entries()) {
    if (!first) out += ':';
    first = false;
    out += "(" + print(e.code.term(), namer) + "," + join_stack(e.stack, namer) + ")";
  }
  return out;
}

std::string format_env(const GlobalEnv& env, Namer& namer) {
  if (env.empty()) return kEmpty;
  std::string out;
  bool first = true;
  env.for_each([&](const Binding& b) {
    if (!first) out += ':';
    first = false;
    out += "[" + namer.name(b.var) + "<-" + format_item(b.item, namer) + "]";
  });
  return out;
}

std::string format_trace_row(const TraceRow& row, Namer& namer) {
  std::string out = format_dump(row.state.dump, namer);
  out += " | " + print(row.state.code.term(), namer);
  out += " | " + format_stack(row.state.stack, namer);
  out += " | " + format_env(row.state.env, namer);
  out += " | ";
  if (row.next) out += to_string(*row.next);
  return out;
}

std::string normalize_primes(const std::string& text) {
  static const std::regex ident(R"([A-Za-z_][A-Za-z0-9_']*)");
  std::unordered_map<std::string, std::unordered_map<std::string, std::size_t>> seen;
  std::string out;
  auto begin = std::sregex_iterator(text.begin(), text.end(), ident);
  std::size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    out.append(text, last, static_cast<std::size_t>(m.position()) - last);
    std::string token = m.str();
    std::string base = token.substr(0, token.find_last_not_of('\'') + 1);
    auto& per_base = seen[base];
    auto [slot, inserted] = per_base.emplace(token, per_base.size());
    out += base + std::string(slot->second, '\'');
    last = static_cast<std::size_t>(m.position() + m.length());
  }
  out.append(text, last, std::string::npos);
  return out;
}

}  // namespace fireball
