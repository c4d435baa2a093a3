#include "fireball/machines.hpp"

namespace fireball {

Stepper stepper_for(MachineKind machine) {
  switch (machine) {
    case MachineKind::Easy:
      return step_easy;
    case MachineKind::Fast:
      return step_fast;
    case MachineKind::Naive:
      return step_naive;
  }
  return step_easy;
}

RunResult run_machine(MachineKind machine, const Term& t, std::uint64_t fuel, bool trace, NameSupply& supply) {
  return run_with(machine, stepper_for(machine), t, fuel, trace, supply);
}

}  // namespace fireball
