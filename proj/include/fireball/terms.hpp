#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace fireball {

/// A variable identity. Equality and hashing use only `id`; `base` and
/// `primes` are for display (`x`, `x'`, `x''`, ...).
struct VarId {
  std::uint64_t id = 0;
  std::string_view base;
  std::uint32_t primes = 0;

  friend bool operator==(const VarId& a, const VarId& b) { return a.id == b.id; }
  friend bool operator!=(const VarId& a, const VarId& b) { return a.id != b.id; }
  friend bool operator<(const VarId& a, const VarId& b) { return a.id < b.id; }

  /// Base name followed by `primes` apostrophes.
  std::string display() const;
};

struct VarIdHash {
  std::size_t operator()(const VarId& v) const noexcept { return std::hash<std::uint64_t>{}(v.id); }
};

using VarSet = std::unordered_set<VarId, VarIdHash>;

/// Fresh-name supply of one evaluation session.
///
/// Identifiers come from a process-wide monotone counter, so VarIds never
/// collide even across sessions. The per-base prime counters are what the
/// session owns: the n-th variable named `x` drawn from this supply is shown
/// as `x` followed by n primes.
class NameSupply {
 public:
  VarId fresh(std::string_view base);
  /// A fresh variable with the same base name as `like`.
  VarId fresh_like(const VarId& like) { return fresh(like.base); }
  /// A fresh variable shown exactly as `base` (free names of parsed
  /// input). Later `fresh(base)` calls get at least one prime.
  VarId named(std::string_view base);

 private:
  std::unordered_map<std::string_view, std::uint32_t> next_prime_;
};

enum class TermKind : std::uint8_t { Var, Abs, App };

/// Immutable λ-term. Subterms are shared, so a Term may be a DAG (the
/// exploding families rely on this); every operation treats it as a tree.
class Term {
 public:
  static Term var(VarId v);
  static Term abs(VarId binder, Term body);
  static Term app(Term left, Term right);

  TermKind kind() const;
  bool is_var() const { return kind() == TermKind::Var; }
  bool is_abs() const { return kind() == TermKind::Abs; }
  bool is_app() const { return kind() == TermKind::App; }

  /// The variable of a Var, or the binder of an Abs.
  const VarId& var() const;
  const VarId& binder() const { return var(); }
  const Term& body() const;
  const Term& left() const { return body(); }
  const Term& right() const;

  /// Pointer identity; structurally equal terms may differ.
  bool same_node(const Term& other) const { return node_ == other.node_; }
  const void* node_address() const { return node_.get(); }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  TermKind kind;
  VarId var;
  std::optional<Term> first;
  std::optional<Term> second;
};

inline TermKind Term::kind() const { return node_->kind; }
inline const VarId& Term::var() const { return node_->var; }
inline const Term& Term::body() const { return *node_->first; }
inline const Term& Term::right() const { return *node_->second; }

/// A term under the well-named discipline: binders pairwise distinct and
/// never occurring outside their own body.
class Code {
 public:
  /// Checks the discipline; throws std::invalid_argument on violation.
  static Code adopt(Term t);
  /// For subterms of a code and for terms built by name-preserving
  /// operations; the discipline is not rechecked.
  static Code trusted(Term t) { return Code(std::move(t)); }

  const Term& term() const { return term_; }

 private:
  explicit Code(Term t) : term_(std::move(t)) {}
  Term term_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct ParseOptions {
  /// Reject free names.
  bool strict_closed = false;
  /// Free names resolved here first; new free names are added to it.
  std::unordered_map<std::string, VarId>* free_names = nullptr;
};

Term parse(std::string_view text, NameSupply& supply, const ParseOptions& options = {});

/// Assigns printable names: the n-th distinct variable with a given base
/// name met by a Namer is shown with n primes. Each VarId keeps its first
/// name; distinct VarIds never share a name within one Namer.
class Namer {
 public:
  const std::string& name(const VarId& v);

 private:
  std::unordered_map<std::uint64_t, std::string> names_;
  std::unordered_set<std::string> used_;
};

/// Minimal-parenthesis rendering with `\` for λ.
std::string print(const Term& t);
/// Same, drawing names from a shared Namer. Free variables are named
/// before binders so they keep their natural spelling.
std::string print(const Term& t, Namer& namer);

enum class FireballClass : std::uint8_t { Abstraction, Inert, NotFireball };

FireballClass classify(const Term& t);
bool is_fireball(const Term& t);
bool is_inert(const Term& t);

VarSet free_vars(const Term& t);
bool occurs_free(const Term& t, const VarId& x);

/// Capture-avoiding t{x←u}; binders of t that would capture a free
/// variable of u are renamed with names from `supply`.
Term subst_meta(const Term& t, const VarId& x, const Term& u, NameSupply& supply);

/// α-equivalent copy with every binder fresh; free variables unchanged.
Code fresh_rename(const Term& t, NameSupply& supply);

bool is_well_named(const Term& t);

std::uint64_t size(const Term& t);
std::uint64_t free_size(const Term& t);

/// Equality after erasing every variable and binder name.
bool skeleton_equal(const Term& t, const Term& u);

/// α-equivalence; free variables compare by VarId.
bool alpha_equal(const Term& t, const Term& u);

/// De Bruijn rendering; equal keys iff α-equivalent. Free variables are
/// rendered by id.
std::string canonical_key(const Term& t);

/// Name-erased rendering; equal keys iff skeleton_equal.
std::string skeleton_key(const Term& t);

/// Visits every subterm (tree order, DAG nodes revisited).
void for_each_subterm(const Term& t, const std::function<void(const Term&)>& visit);

}  // namespace fireball
