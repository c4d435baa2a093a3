#include "fireball/naive.hpp"

namespace fireball {

Code code_of_item(const Item& item, NameSupply& supply) {
  if (item.is_abs()) return fresh_rename(item.code().term(), supply);
  Term t = Term::var(item.head());
  item.args().for_each([&](const Item& arg) { t = Term::app(t, code_of_item(arg, supply).term()); });
  return Code::trusted(t);
}

std::optional<StepOutcome> step_naive(const State& s, NameSupply& supply) {
  const Term& code = s.code.term();
  if (code.is_var()) {
    if (auto bound = s.env.lookup(code.var())) {
      Code copy = code_of_item(*bound, supply);
      std::uint64_t cost = size(copy.term());
      return StepOutcome{Transition::S, State{s.dump, std::move(copy), s.stack, s.env}, cost};
    }
    if (s.dump.empty()) return std::nullopt;
    const DumpEntry& top = s.dump.top();
    return StepOutcome{Transition::C3,
                       State{s.dump.pop(), top.code, top.stack.push(Item::variable(code.var(), s.stack)), s.env}};
  }
  if (code.is_app())
    return StepOutcome{Transition::C1,
                       State{s.dump.push({Code::trusted(code.left()), s.stack}), Code::trusted(code.right()),
                             Stack{}, s.env}};
  if (!s.stack.empty())
    return StepOutcome{Transition::M, State{s.dump, Code::trusted(code.body()), s.stack.tail(),
                                            s.env.bind(code.binder(), s.stack.head())}};
  if (s.dump.empty()) return std::nullopt;
  const DumpEntry& top = s.dump.top();
  return StepOutcome{Transition::C2, State{s.dump.pop(), top.code, top.stack.push(Item::abstraction(s.code)), s.env}};
}

RunResult run_naive(const Term& t, std::uint64_t fuel, bool trace, NameSupply& supply) {
  return run_with(MachineKind::Naive, step_naive, t, fuel, trace, supply);
}

}  // namespace fireball
