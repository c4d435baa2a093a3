#include "fireball/terms.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>

namespace fireball {

namespace {

std::atomic<std::uint64_t> g_next_id{1};

std::string_view intern(std::string_view s) {
  static std::mutex mu;
  static std::unordered_set<std::string> pool;
  std::lock_guard<std::mutex> lock(mu);
  return *pool.emplace(s).first;
}

}  // namespace

std::string VarId::display() const {
  std::string out(base);
  out.append(primes, '\'');
  return out;
}

VarId NameSupply::fresh(std::string_view base) {
  base = intern(base);
  return VarId{g_next_id.fetch_add(1), base, next_prime_[base]++};
}

VarId NameSupply::named(std::string_view base) {
  base = intern(base);
  auto& next = next_prime_[base];
  next = std::max<std::uint32_t>(next, 1);
  return VarId{g_next_id.fetch_add(1), base, 0};
}

Term Term::var(VarId v) {
  return Term(std::make_shared<const Node>(Node{TermKind::Var, v, std::nullopt, std::nullopt}));
}

Term Term::abs(VarId binder, Term body) {
  return Term(std::make_shared<const Node>(Node{TermKind::Abs, binder, std::move(body), std::nullopt}));
}

Term Term::app(Term left, Term right) {
  return Term(std::make_shared<const Node>(Node{TermKind::App, VarId{}, std::move(left), std::move(right)}));
}

Code Code::adopt(Term t) {
  if (!is_well_named(t)) throw std::invalid_argument("code is not well-named: " + print(t));
  return Code(std::move(t));
}

// ---------------------------------------------------------------------------
// Parsing

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " at byte " + std::to_string(offset)), offset_(offset) {}

namespace {

class Parser {
 public:
  Parser(std::string_view text, NameSupply& supply, const ParseOptions& options)
      : text_(text), supply_(supply), options_(options) {
    free_ = options.free_names ? options.free_names : &local_free_;
  }

  Term parse_all() {
    Term t = parse_term();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected input", pos_);
    return t;
  }

 private:
  static bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '\''; }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  // Length of a lambda token at the cursor, 0 if none.
  std::size_t lambda_len() const {
    if (pos_ < text_.size() && text_[pos_] == '\\') return 1;
    if (text_.substr(pos_, 2) == "\xCE\xBB") return 2;
    return 0;
  }

  bool at_atom() const {
    return pos_ < text_.size() && (text_[pos_] == '(' || ident_start(text_[pos_]));
  }

  // term ::= atom* [abs], with at least one component.
  Term parse_term() {
    skip_ws();
    std::optional<Term> acc;
    while (true) {
      skip_ws();
      if (at_atom()) {
        Term a = parse_atom();
        acc = acc ? Term::app(*acc, a) : a;
      } else if (lambda_len() > 0) {
        Term a = parse_abs();
        acc = acc ? Term::app(*acc, a) : a;
        break;
      } else {
        break;
      }
    }
    if (!acc) throw ParseError("expected a term", pos_);
    return *acc;
  }

  Term parse_abs() {
    pos_ += lambda_len();
    skip_ws();
    std::string name = parse_ident();
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != '.') throw ParseError("expected '.'", pos_);
    ++pos_;
    VarId binder = supply_.fresh(name);
    scopes_[name].push_back(binder);
    Term body = parse_term();
    scopes_[name].pop_back();
    return Term::abs(binder, body);
  }

  Term parse_atom() {
    if (text_[pos_] == '(') {
      ++pos_;
      Term t = parse_term();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return t;
    }
    std::size_t start = pos_;
    std::string name = parse_ident();
    if (auto it = scopes_.find(name); it != scopes_.end() && !it->second.empty())
      return Term::var(it->second.back());
    if (options_.strict_closed) throw ParseError("unbound name '" + name + "'", start);
    auto [it, inserted] = free_->try_emplace(name, VarId{});
    if (inserted) it->second = supply_.named(name);
    return Term::var(it->second);
  }

  std::string parse_ident() {
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) throw ParseError("expected identifier", pos_);
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  NameSupply& supply_;
  const ParseOptions& options_;
  std::size_t pos_ = 0;
  std::unordered_map<std::string, std::vector<VarId>> scopes_;
  std::unordered_map<std::string, VarId> local_free_;
  std::unordered_map<std::string, VarId>* free_;
};

}  // namespace

Term parse(std::string_view text, NameSupply& supply, const ParseOptions& options) {
  return Parser(text, supply, options).parse_all();
}

// ---------------------------------------------------------------------------
// Printing

const std::string& Namer::name(const VarId& v) {
  if (auto it = names_.find(v.id); it != names_.end()) return it->second;
  // The first unused spelling among base, base', base'', ...
  std::string candidate(v.base);
  while (used_.count(candidate)) candidate += '\'';
  used_.insert(candidate);
  return names_.emplace(v.id, std::move(candidate)).first->second;
}

namespace {

enum class Pos { Top, Head, ArgLast, ArgFollowed };

void render(const Term& t, Pos pos, Namer& namer, std::string& out) {
  switch (t.kind()) {
    case TermKind::Var:
      out += namer.name(t.var());
      return;
    case TermKind::Abs: {
      bool parens = pos == Pos::Head || pos == Pos::ArgFollowed;
      if (parens) out += '(';
      out += '\\';
      out += namer.name(t.binder());
      out += '.';
      render(t.body(), Pos::Top, namer, out);
      if (parens) out += ')';
      return;
    }
    case TermKind::App: {
      bool parens = pos == Pos::ArgLast || pos == Pos::ArgFollowed;
      if (parens) out += '(';
      bool followed = pos == Pos::Head;
      render(t.left(), Pos::Head, namer, out);
      out += ' ';
      render(t.right(), followed ? Pos::ArgFollowed : Pos::ArgLast, namer, out);
      if (parens) out += ')';
      return;
    }
  }
}

}  // namespace

std::string print(const Term& t, Namer& namer) {
  VarSet free = free_vars(t);
  std::vector<VarId> fv(free.begin(), free.end());
  std::sort(fv.begin(), fv.end());
  for (const auto& v : fv) namer.name(v);
  std::string out;
  render(t, Pos::Top, namer, out);
  return out;
}

std::string print(const Term& t) {
  Namer namer;
  return print(t, namer);
}

// ---------------------------------------------------------------------------
// Classification

FireballClass classify(const Term& t) {
  if (t.is_abs()) return FireballClass::Abstraction;
  const Term* head = &t;
  while (head->is_app()) {
    if (!is_fireball(head->right())) return FireballClass::NotFireball;
    head = &head->left();
  }
  return head->is_var() ? FireballClass::Inert : FireballClass::NotFireball;
}

bool is_fireball(const Term& t) { return classify(t) != FireballClass::NotFireball; }
bool is_inert(const Term& t) { return classify(t) == FireballClass::Inert; }

// ---------------------------------------------------------------------------
// Free variables and substitution

namespace {

void collect_free(const Term& t, std::unordered_map<std::uint64_t, int>& bound, VarSet& out) {
  switch (t.kind()) {
    case TermKind::Var:
      if (!bound.count(t.var().id)) out.insert(t.var());
      return;
    case TermKind::Abs: {
      int& depth = bound[t.binder().id];
      ++depth;
      collect_free(t.body(), bound, out);
      if (--bound[t.binder().id] == 0) bound.erase(t.binder().id);
      return;
    }
    case TermKind::App:
      collect_free(t.left(), bound, out);
      collect_free(t.right(), bound, out);
      return;
  }
}

bool occurs_free_rec(const Term& t, const VarId& x) {
  switch (t.kind()) {
    case TermKind::Var:
      return t.var() == x;
    case TermKind::Abs:
      return t.binder() != x && occurs_free_rec(t.body(), x);
    case TermKind::App:
      return occurs_free_rec(t.left(), x) || occurs_free_rec(t.right(), x);
  }
  return false;
}

class Substituter {
 public:
  Substituter(const VarId& x, const Term& u, NameSupply& supply)
      : x_(x), u_(u), fv_u_(free_vars(u)), supply_(supply) {}

  Term run(const Term& t) {
    if (auto it = memo_.find(t.node_address()); it != memo_.end()) return it->second;
    Term result = step(t);
    memo_.emplace(t.node_address(), result);
    return result;
  }

 private:
  Term step(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var:
        return t.var() == x_ ? u_ : t;
      case TermKind::App: {
        Term l = run(t.left());
        Term r = run(t.right());
        if (l.same_node(t.left()) && r.same_node(t.right())) return t;
        return Term::app(l, r);
      }
      case TermKind::Abs: {
        if (t.binder() == x_) return t;
        if (fv_u_.count(t.binder())) {
          if (!occurs_free_rec(t.body(), x_)) return t;
          VarId fresh = supply_.fresh_like(t.binder());
          Term renamed = subst_meta(t.body(), t.binder(), Term::var(fresh), supply_);
          return Term::abs(fresh, run(renamed));
        }
        Term b = run(t.body());
        if (b.same_node(t.body())) return t;
        return Term::abs(t.binder(), b);
      }
    }
    return t;
  }

  VarId x_;
  Term u_;
  VarSet fv_u_;
  NameSupply& supply_;
  std::unordered_map<const void*, Term> memo_;
};

}  // namespace

VarSet free_vars(const Term& t) {
  VarSet out;
  std::unordered_map<std::uint64_t, int> bound;
  collect_free(t, bound, out);
  return out;
}

bool occurs_free(const Term& t, const VarId& x) { return occurs_free_rec(t, x); }

Term subst_meta(const Term& t, const VarId& x, const Term& u, NameSupply& supply) {
  return Substituter(x, u, supply).run(t);
}

namespace {

Term rename_binders(const Term& t, std::unordered_map<std::uint64_t, VarId>& renaming, NameSupply& supply) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = renaming.find(t.var().id);
      return it == renaming.end() ? t : Term::var(it->second);
    }
    case TermKind::Abs: {
      VarId fresh = supply.fresh_like(t.binder());
      std::optional<VarId> shadowed;
      if (auto it = renaming.find(t.binder().id); it != renaming.end()) shadowed = it->second;
      renaming[t.binder().id] = fresh;
      Term body = rename_binders(t.body(), renaming, supply);
      if (shadowed)
        renaming[t.binder().id] = *shadowed;
      else
        renaming.erase(t.binder().id);
      return Term::abs(fresh, body);
    }
    case TermKind::App: {
      Term l = rename_binders(t.left(), renaming, supply);
      return Term::app(l, rename_binders(t.right(), renaming, supply));
    }
  }
  return t;
}

bool well_named_rec(const Term& t, VarSet& binders, std::unordered_map<std::uint64_t, int>& scope,
                    VarSet& free_occ) {
  switch (t.kind()) {
    case TermKind::Var:
      if (!scope.count(t.var().id)) free_occ.insert(t.var());
      return true;
    case TermKind::Abs: {
      if (!binders.insert(t.binder()).second) return false;
      scope[t.binder().id] = 1;
      bool ok = well_named_rec(t.body(), binders, scope, free_occ);
      scope.erase(t.binder().id);
      return ok;
    }
    case TermKind::App:
      return well_named_rec(t.left(), binders, scope, free_occ) &&
             well_named_rec(t.right(), binders, scope, free_occ);
  }
  return true;
}

}  // namespace

Code fresh_rename(const Term& t, NameSupply& supply) {
  std::unordered_map<std::uint64_t, VarId> renaming;
  return Code::trusted(rename_binders(t, renaming, supply));
}

bool is_well_named(const Term& t) {
  VarSet binders, free_occ;
  std::unordered_map<std::uint64_t, int> scope;
  if (!well_named_rec(t, binders, scope, free_occ)) return false;
  for (const auto& v : free_occ)
    if (binders.count(v)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Measures and comparisons

std::uint64_t size(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
      return 1;
    case TermKind::Abs:
      return 1 + size(t.body());
    case TermKind::App:
      return 1 + size(t.left()) + size(t.right());
  }
  return 0;
}

std::uint64_t free_size(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
      return 1;
    case TermKind::Abs:
      return 0;
    case TermKind::App:
      return free_size(t.left()) + free_size(t.right());
  }
  return 0;
}

bool skeleton_equal(const Term& t, const Term& u) {
  if (t.kind() != u.kind()) return false;
  switch (t.kind()) {
    case TermKind::Var:
      return true;
    case TermKind::Abs:
      return skeleton_equal(t.body(), u.body());
    case TermKind::App:
      return skeleton_equal(t.left(), u.left()) && skeleton_equal(t.right(), u.right());
  }
  return false;
}

namespace {

using Levels = std::unordered_map<std::uint64_t, std::vector<int>>;

bool alpha_rec(const Term& t, const Term& u, Levels& lt, Levels& lu, int depth) {
  if (t.kind() != u.kind()) return false;
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = lt.find(t.var().id);
      auto iu = lu.find(u.var().id);
      bool bt = it != lt.end() && !it->second.empty();
      bool bu = iu != lu.end() && !iu->second.empty();
      if (bt != bu) return false;
      if (!bt) return t.var() == u.var();
      return it->second.back() == iu->second.back();
    }
    case TermKind::Abs: {
      auto& st = lt[t.binder().id];
      st.push_back(depth);
      auto& su = lu[u.binder().id];
      su.push_back(depth);
      bool ok = alpha_rec(t.body(), u.body(), lt, lu, depth + 1);
      lt[t.binder().id].pop_back();
      lu[u.binder().id].pop_back();
      return ok;
    }
    case TermKind::App:
      return alpha_rec(t.left(), u.left(), lt, lu, depth) && alpha_rec(t.right(), u.right(), lt, lu, depth);
  }
  return false;
}

void key_rec(const Term& t, Levels& levels, int depth, std::string& out) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = levels.find(t.var().id);
      if (it != levels.end() && !it->second.empty()) {
        out += '#';
        out += std::to_string(depth - 1 - it->second.back());
      } else {
        out += 'f';
        out += std::to_string(t.var().id);
      }
      out += ' ';
      return;
    }
    case TermKind::Abs:
      levels[t.binder().id].push_back(depth);
      out += '\\';
      key_rec(t.body(), levels, depth + 1, out);
      levels[t.binder().id].pop_back();
      return;
    case TermKind::App:
      out += '@';
      key_rec(t.left(), levels, depth, out);
      key_rec(t.right(), levels, depth, out);
      return;
  }
}

void skeleton_rec(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::Var:
      out += 'v';
      return;
    case TermKind::Abs:
      out += '\\';
      skeleton_rec(t.body(), out);
      return;
    case TermKind::App:
      out += '@';
      skeleton_rec(t.left(), out);
      skeleton_rec(t.right(), out);
      return;
  }
}

}  // namespace

bool alpha_equal(const Term& t, const Term& u) {
  if (t.same_node(u)) return true;
  Levels lt, lu;
  return alpha_rec(t, u, lt, lu, 0);
}

std::string canonical_key(const Term& t) {
  Levels levels;
  std::string out;
  key_rec(t, levels, 0, out);
  return out;
}

std::string skeleton_key(const Term& t) {
  std::string out;
  skeleton_rec(t, out);
  return out;
}

void for_each_subterm(const Term& t, const std::function<void(const Term&)>& visit) {
  visit(t);
  switch (t.kind()) {
    case TermKind::Var:
      return;
    case TermKind::Abs:
      for_each_subterm(t.body(), visit);
      return;
    case TermKind::App:
      for_each_subterm(t.left(), visit);
      for_each_subterm(t.right(), visit);
      return;
  }
}

}  // namespace fireball
