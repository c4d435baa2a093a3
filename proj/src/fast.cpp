#include "fireball/fast.hpp"

#include <stdexcept>

namespace fireball {

bool no_substitution_needed(const std::optional<Item>& bound, const Stack& stack) {
  return !bound || !bound->is_abs() || stack.empty();
}

namespace {

Term rename_rec(const Term& t, const VarId& x, const VarId& y) {
  switch (t.kind()) {
    case TermKind::Var:
      return t.var() == x ? Term::var(y) : t;
    case TermKind::Abs: {
      if (t.binder() == y) throw std::logic_error("rename_in_code: target name is bound in the body");
      Term body = rename_rec(t.body(), x, y);
      return body.same_node(t.body()) ? t : Term::abs(t.binder(), body);
    }
    case TermKind::App: {
      Term l = rename_rec(t.left(), x, y);
      Term r = rename_rec(t.right(), x, y);
      return l.same_node(t.left()) && r.same_node(t.right()) ? t : Term::app(l, r);
    }
  }
  return t;
}

}  // namespace

Code rename_in_code(const Code& body, const VarId& x, const VarId& y) {
  return Code::trusted(rename_rec(body.term(), x, y));
}

std::optional<StepOutcome> step_fast(const State& s, NameSupply& supply) {
  const Term& code = s.code.term();
  switch (code.kind()) {
    case TermKind::App:
      return StepOutcome{Transition::C1,
                         State{s.dump.push({Code::trusted(code.left()), s.stack}), Code::trusted(code.right()),
                               Stack{}, s.env}};
    case TermKind::Abs: {
      if (!s.stack.empty()) {
        const Item& arg = s.stack.head();
        if (!arg.is_abs() && arg.args().empty()) {
          Code body = rename_in_code(Code::trusted(code.body()), code.binder(), arg.head());
          std::uint64_t cost = size(code.body());
          return StepOutcome{Transition::B1, State{s.dump, std::move(body), s.stack.tail(), s.env}, cost};
        }
        return StepOutcome{Transition::B2, State{s.dump, Code::trusted(code.body()), s.stack.tail(),
                                                 s.env.bind(code.binder(), arg)}};
      }
      if (!s.dump.empty()) {
        const DumpEntry& top = s.dump.top();
        return StepOutcome{Transition::C2,
                           State{s.dump.pop(), top.code, top.stack.push(Item::abstraction(s.code)), s.env}};
      }
      return std::nullopt;
    }
    case TermKind::Var: {
      auto bound = s.env.lookup(code.var());
      if (!no_substitution_needed(bound, s.stack)) {
        Code copy = fresh_rename(bound->code().term(), supply);
        std::uint64_t cost = size(copy.term());
        return StepOutcome{Transition::S, State{s.dump, std::move(copy), s.stack, s.env}, cost};
      }
      if (!s.dump.empty()) {
        const DumpEntry& top = s.dump.top();
        return StepOutcome{Transition::C3, State{s.dump.pop(), top.code,
                                                 top.stack.push(Item::variable(code.var(), s.stack)), s.env}};
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

RunResult run_fast(const Term& t, std::uint64_t fuel, bool trace, NameSupply& supply) {
  return run_with(MachineKind::Fast, step_fast, t, fuel, trace, supply);
}

}  // namespace fireball
