#include "fireball/easy.hpp"

namespace fireball {

std::optional<StepOutcome> step_easy(const State& s, NameSupply& supply) {
  const Term& code = s.code.term();
  switch (code.kind()) {
    case TermKind::App:
      return StepOutcome{Transition::C1,
                         State{s.dump.push({Code::trusted(code.left()), s.stack}), Code::trusted(code.right()),
                               Stack{}, s.env}};
    case TermKind::Abs:
      if (!s.stack.empty())
        return StepOutcome{Transition::M, State{s.dump, Code::trusted(code.body()), s.stack.tail(),
                                                s.env.bind(code.binder(), s.stack.head())}};
      if (!s.dump.empty()) {
        const DumpEntry& top = s.dump.top();
        return StepOutcome{Transition::C2,
                           State{s.dump.pop(), top.code, top.stack.push(Item::abstraction(s.code)), s.env}};
      }
      return std::nullopt;
    case TermKind::Var: {
      auto bound = s.env.lookup(code.var());
      if (bound && bound->is_abs()) {
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

RunResult run_easy(const Term& t, std::uint64_t fuel, bool trace, NameSupply& supply) {
  return run_with(MachineKind::Easy, step_easy, t, fuel, trace, supply);
}

}  // namespace fireball
