#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fireball/terms.hpp"

namespace fireball {

/// βλ fires an abstraction argument, βi an inert one.
enum class StepKind : std::uint8_t { BetaLambda, BetaInert };

const char* to_string(StepKind k);

struct Step {
  Term result;
  StepKind kind;
};

/// One step of the right-to-left strategy, or nullopt iff `t` is a fireball.
std::optional<Step> rtl_step(const Term& t, NameSupply& supply);

struct Derivation {
  Term start;
  std::vector<Step> steps;
  bool exhausted = false;

  const Term& last() const { return steps.empty() ? start : steps.back().result; }
  std::size_t count(StepKind k) const;
};

Derivation evaluate_rtl(const Term& t, std::uint64_t fuel, NameSupply& supply);

/// Every →βf reduct of `t` under evaluation contexts (no reduction under λ),
/// deduplicated up to α. Throws std::length_error when size(t) exceeds
/// `size_cap`.
inline constexpr std::uint64_t kOneStepSizeCap = 12;
std::vector<Step> all_one_steps(const Term& t, NameSupply& supply, std::uint64_t size_cap = kOneStepSizeCap);

/// Outcome of exploring the full →βf reduction graph of a term.
struct DerivationProfile {
  enum class Status { Normalizing, Diverging, TooLarge };
  Status status = Status::TooLarge;
  /// (length, βλ count, βi count) of every maximal derivation; filled
  /// only when Normalizing.
  std::set<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> shapes;
  /// canonical_key of every normal form reachable, also when Diverging.
  std::set<std::string> normal_forms;
  std::size_t nodes = 0;
};

inline constexpr std::size_t kGraphNodeCap = 10000;

DerivationProfile explore_derivations(const Term& t, NameSupply& supply, std::size_t node_cap = kGraphNodeCap,
                                      std::uint64_t size_cap = 64);

// Term families. `y` is the free variable the open families are built on.

/// t_0 = y, t_{n+1} = (λx.x x) t_n.
Term gen_t(unsigned n, NameSupply& supply, const VarId& y);
/// γ_0 = y, γ_{n+1} = γ_n γ_n (shared subterms).
Term gen_gamma(unsigned n, const VarId& y);
/// r_n r_n with r_n = λx.(…((y x) x)…) x, n occurrences of x; n ≥ 1.
Term gen_u(unsigned n, NameSupply& supply, const VarId& y);
/// The right-hand side of u_n's single step: (…((y r_n) r_n)…) r_n.
Term gen_u_reduct(unsigned n, NameSupply& supply, const VarId& y);
/// s_n I with s_1 = λx.λy.(y x x), s_{n+1} = λx.(s_n (λy.(y x x))); n ≥ 1.
Term gen_s_applied(unsigned n, NameSupply& supply);
/// r_0 = I, r_{n+1} = λy.(y r_n r_n) (shared subterms).
Term gen_r(unsigned n, NameSupply& supply);

/// Checks both directions of "t →βf u iff t{x←i} →βf u{x←i}" on all
/// one-step reducts. Throws std::invalid_argument unless `i` is inert.
bool check_inert_substitution(const Term& t, const VarId& x, const Term& i, NameSupply& supply);

}  // namespace fireball
