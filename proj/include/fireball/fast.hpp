#pragma once

#include <optional>

#include "fireball/machine.hpp"

namespace fireball {

/// True when a variable bound to `bound` in head position with the given
/// stack is left alone: unbound, bound to a variable item, or bound to an
/// abstraction that is not applied.
bool no_substitution_needed(const std::optional<Item>& bound, const Stack& stack);

/// Replaces the free occurrences of `x` in `body` by `y`. Throws
/// std::logic_error if `y` is a binder of `body`.
Code rename_in_code(const Code& body, const VarId& x, const VarId& y);

/// One Fast GLAMOUr transition, or nullopt on a final state.
std::optional<StepOutcome> step_fast(const State& s, NameSupply& supply);

RunResult run_fast(const Term& t, std::uint64_t fuel, bool trace, NameSupply& supply);

}  // namespace fireball
