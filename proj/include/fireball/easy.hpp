#pragma once

#include <optional>

#include "fireball/machine.hpp"

namespace fireball {

/// One Easy GLAMOUr transition, or nullopt on a final state.
std::optional<StepOutcome> step_easy(const State& s, NameSupply& supply);

RunResult run_easy(const Term& t, std::uint64_t fuel, bool trace, NameSupply& supply);

}  // namespace fireball
