#pragma once

#include "fireball/easy.hpp"
#include "fireball/fast.hpp"
#include "fireball/naive.hpp"

namespace fireball {

Stepper stepper_for(MachineKind machine);

RunResult run_machine(MachineKind machine, const Term& t, std::uint64_t fuel, bool trace, NameSupply& supply);

inline constexpr MachineKind kAllMachines[] = {MachineKind::Easy, MachineKind::Fast, MachineKind::Naive};

}  // namespace fireball
