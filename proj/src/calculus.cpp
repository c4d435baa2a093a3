#include "fireball/calculus.hpp"

#include <deque>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace fireball {

const char* to_string(StepKind k) { return k == StepKind::BetaLambda ? "betaL" : "betaI"; }

std::size_t Derivation::count(StepKind k) const {
  std::size_t n = 0;
  for (const auto& s : steps) n += s.kind == k;
  return n;
}

namespace {

Step fire(const Term& redex, NameSupply& supply) {
  const Term& arg = redex.right();
  StepKind kind = arg.is_abs() ? StepKind::BetaLambda : StepKind::BetaInert;
  return {subst_meta(redex.left().body(), redex.left().binder(), arg, supply), kind};
}

}  // namespace

std::optional<Step> rtl_step(const Term& t, NameSupply& supply) {
  if (!t.is_app()) return std::nullopt;
  if (auto s = rtl_step(t.right(), supply)) return Step{Term::app(t.left(), s->result), s->kind};
  // The right subterm is now βf-normal, i.e. a fireball.
  if (t.left().is_abs()) return fire(t, supply);
  if (auto s = rtl_step(t.left(), supply)) return Step{Term::app(s->result, t.right()), s->kind};
  return std::nullopt;
}

Derivation evaluate_rtl(const Term& t, std::uint64_t fuel, NameSupply& supply) {
  Derivation d{t, {}, false};
  Term cur = t;
  for (std::uint64_t i = 0; i < fuel; ++i) {
    auto s = rtl_step(cur, supply);
    if (!s) return d;
    cur = s->result;
    d.steps.push_back(std::move(*s));
  }
  d.exhausted = rtl_step(cur, supply).has_value();
  return d;
}

namespace {

void one_steps(const Term& t, NameSupply& supply, std::vector<Step>& out) {
  if (!t.is_app()) return;
  if (t.left().is_abs() && is_fireball(t.right())) out.push_back(fire(t, supply));
  std::vector<Step> sub;
  one_steps(t.left(), supply, sub);
  for (auto& s : sub) out.push_back({Term::app(s.result, t.right()), s.kind});
  sub.clear();
  one_steps(t.right(), supply, sub);
  for (auto& s : sub) out.push_back({Term::app(t.left(), s.result), s.kind});
}

}  // namespace

std::vector<Step> all_one_steps(const Term& t, NameSupply& supply, std::uint64_t size_cap) {
  if (size(t) > size_cap)
    throw std::length_error("all_one_steps: term of size " + std::to_string(size(t)) + " exceeds cap " +
                            std::to_string(size_cap));
  std::vector<Step> raw;
  one_steps(t, supply, raw);
  std::vector<Step> out;
  std::set<std::pair<std::string, StepKind>> seen;
  for (auto& s : raw)
    if (seen.emplace(canonical_key(s.result), s.kind).second) out.push_back(std::move(s));
  return out;
}

DerivationProfile explore_derivations(const Term& t, NameSupply& supply, std::size_t node_cap,
                                      std::uint64_t size_cap) {
  DerivationProfile profile;
  struct Node {
    Term term;
    std::vector<std::pair<std::size_t, StepKind>> succ;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> index;

  auto intern = [&](const Term& u) -> std::optional<std::size_t> {
    std::string key = canonical_key(u);
    if (auto it = index.find(key); it != index.end()) return it->second;
    if (nodes.size() >= node_cap) return std::nullopt;
    index.emplace(std::move(key), nodes.size());
    nodes.push_back({u, {}});
    return nodes.size() - 1;
  };

  intern(t);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (size(nodes[i].term) > size_cap) {
      profile.nodes = nodes.size();
      return profile;
    }
    for (auto& s : all_one_steps(nodes[i].term, supply, size_cap)) {
      auto j = intern(s.result);
      if (!j) {
        profile.nodes = nodes.size();
        return profile;
      }
      nodes[i].succ.emplace_back(*j, s.kind);
    }
  }
  profile.nodes = nodes.size();

  // Depth-first search: a back edge means an infinite derivation.
  enum class Mark { White, Grey, Black };
  using Shape = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;
  std::vector<Mark> mark(nodes.size(), Mark::White);
  std::vector<std::set<Shape>> shapes(nodes.size());
  bool cyclic = false;
  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    mark[i] = Mark::Grey;
    if (nodes[i].succ.empty()) {
      shapes[i].insert({0, 0, 0});
      profile.normal_forms.insert(canonical_key(nodes[i].term));
    }
    for (auto [j, kind] : nodes[i].succ) {
      if (mark[j] == Mark::Grey) {
        cyclic = true;
        continue;
      }
      if (mark[j] == Mark::White) visit(j);
      for (auto [len, lam, inert] : shapes[j]) {
        if (kind == StepKind::BetaLambda)
          shapes[i].insert({len + 1, lam + 1, inert});
        else
          shapes[i].insert({len + 1, lam, inert + 1});
      }
    }
    mark[i] = Mark::Black;
  };
  visit(0);
  if (cyclic) {
    profile.status = DerivationProfile::Status::Diverging;
    return profile;
  }
  profile.status = DerivationProfile::Status::Normalizing;
  profile.shapes = std::move(shapes[0]);
  return profile;
}

// ---------------------------------------------------------------------------
// Families

namespace {

Term self_application(NameSupply& supply) {
  VarId x = supply.fresh("x");
  return Term::abs(x, Term::app(Term::var(x), Term::var(x)));
}

Term gen_r_body(unsigned n, NameSupply& supply, const VarId& y) {
  VarId x = supply.fresh("x");
  Term body = Term::var(y);
  for (unsigned i = 0; i < n; ++i) body = Term::app(body, Term::var(x));
  return Term::abs(x, body);
}

Term identity(NameSupply& supply) {
  VarId z = supply.fresh("z");
  return Term::abs(z, Term::var(z));
}

}  // namespace

Term gen_t(unsigned n, NameSupply& supply, const VarId& y) {
  Term t = Term::var(y);
  for (unsigned i = 0; i < n; ++i) t = Term::app(self_application(supply), t);
  return t;
}

Term gen_gamma(unsigned n, const VarId& y) {
  Term g = Term::var(y);
  for (unsigned i = 0; i < n; ++i) g = Term::app(g, g);
  return g;
}

Term gen_u(unsigned n, NameSupply& supply, const VarId& y) {
  if (n < 1) throw std::invalid_argument("gen_u: n must be at least 1");
  Term left = gen_r_body(n, supply, y);
  return Term::app(left, gen_r_body(n, supply, y));
}

Term gen_u_reduct(unsigned n, NameSupply& supply, const VarId& y) {
  Term r = gen_r_body(n, supply, y);
  Term out = Term::var(y);
  for (unsigned i = 0; i < n; ++i) out = Term::app(out, r);
  return out;
}

Term gen_s_applied(unsigned n, NameSupply& supply) {
  if (n < 1) throw std::invalid_argument("gen_s_applied: n must be at least 1");
  // λy.(y x x) for a given x.
  auto twice = [&](const VarId& x) {
    VarId y = supply.fresh("y");
    return Term::abs(y, Term::app(Term::app(Term::var(y), Term::var(x)), Term::var(x)));
  };
  // Build s_n from the outermost binder inwards: s_n = λx_n.(s_{n-1} (λy.(y x_n x_n))).
  std::function<Term(unsigned)> s = [&](unsigned k) -> Term {
    VarId x = supply.fresh("x");
    if (k == 1) return Term::abs(x, twice(x));
    Term inner = s(k - 1);
    return Term::abs(x, Term::app(inner, twice(x)));
  };
  Term sn = s(n);
  return Term::app(sn, identity(supply));
}

Term gen_r(unsigned n, NameSupply& supply) {
  Term r = identity(supply);
  for (unsigned i = 0; i < n; ++i) {
    VarId y = supply.fresh("y");
    r = Term::abs(y, Term::app(Term::app(Term::var(y), r), r));
  }
  return r;
}

bool check_inert_substitution(const Term& t, const VarId& x, const Term& i, NameSupply& supply) {
  if (!is_inert(i)) throw std::invalid_argument("check_inert_substitution: substituted term is not inert");
  constexpr std::uint64_t cap = 256;
  std::set<std::pair<std::string, StepKind>> lhs, rhs;
  for (const auto& s : all_one_steps(t, supply, cap))
    lhs.emplace(canonical_key(subst_meta(s.result, x, i, supply)), s.kind);
  for (const auto& s : all_one_steps(subst_meta(t, x, i, supply), supply, cap))
    rhs.emplace(canonical_key(s.result), s.kind);
  return lhs == rhs;
}

}  // namespace fireball
