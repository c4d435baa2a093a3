#pragma once

#include <optional>

#include "fireball/machine.hpp"

namespace fireball {

/// Read an item back as code: a renamed copy of an abstraction, or the head
/// applied to the read-back arguments.
Code code_of_item(const Item& item, NameSupply& supply);

/// The Easy GLAMOUr without the usefulness guard: every bound variable is
/// substituted, inert items included.
std::optional<StepOutcome> step_naive(const State& s, NameSupply& supply);

RunResult run_naive(const Term& t, std::uint64_t fuel, bool trace, NameSupply& supply);

}  // namespace fireball
