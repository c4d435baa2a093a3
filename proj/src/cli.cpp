#include "fireball/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <unordered_map>

#include "fireball/verify.hpp"

namespace fireball {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

struct Config {
  std::string machine;
  std::uint64_t fuel = 1000000;
  std::uint64_t budget = kDefaultDecodeBudget;
  std::string format = "table";
  std::uint64_t seed = 1;
  bool golden = false;
  std::string file;
  std::string term;
  std::string family;
  unsigned n = 0;
  std::size_t corpus = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Machines named by --machine; "oracle" stands for the right-to-left
// evaluator.
struct Selection {
  std::vector<MachineKind> machines;
  bool oracle = false;
};

Selection select(const std::string& name, const std::string& fallback, bool allow_oracle) {
  const std::string& m = name.empty() ? fallback : name;
  Selection s;
  if (m == "all") {
    s.machines.assign(std::begin(kAllMachines), std::end(kAllMachines));
    s.oracle = allow_oracle;
  } else if (m == "oracle") {
    if (!allow_oracle) throw UsageError("--machine oracle is not available here");
    s.oracle = true;
  } else if (m == "easy+fast") {
    s.machines = {MachineKind::Easy, MachineKind::Fast};
  } else if (auto k = machine_from_string(m)) {
    s.machines = {*k};
  } else {
    throw UsageError("unknown machine " + m);
  }
  return s;
}

std::string read_all(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string term_text(const Config& cfg, std::istream& in) {
  if (!cfg.term.empty()) return cfg.term;
  if (cfg.file.empty() || cfg.file == "-") return read_all(in);
  std::ifstream f(cfg.file);
  if (!f) throw UsageError("cannot read " + cfg.file);
  return read_all(f);
}

// Tree size of a possibly shared term, saturating at `cap`.
std::uint64_t tree_size(const Term& t, std::uint64_t cap) {
  std::unordered_map<const void*, std::uint64_t> memo;
  std::function<std::uint64_t(const Term&)> go = [&](const Term& u) -> std::uint64_t {
    if (u.is_var()) return 1;
    if (auto it = memo.find(u.node_address()); it != memo.end()) return it->second;
    std::uint64_t s = u.is_abs() ? 1 + go(u.body()) : 1 + go(u.left()) + go(u.right());
    s = std::min(s, cap);
    memo.emplace(u.node_address(), s);
    return s;
  };
  return go(t);
}

struct Outcome {
  std::string name;
  std::uint64_t size_t0 = 0;
  std::uint64_t transitions = 0;
  Counters counters;
  bool fuel_exhausted = false;
  std::uint64_t decoded_size = 0;
  std::optional<std::string> normal_form;
  std::optional<std::uint64_t> state_size;
  // Oracle only.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> oracle_kinds;
};

Outcome run_one(MachineKind m, const Term& t, const Config& cfg, NameSupply& supply, Namer& namer,
                std::optional<RunResult>* keep = nullptr, bool trace = false) {
  RunResult r = run_machine(m, t, cfg.fuel, trace, supply);
  Outcome o;
  o.name = to_string(m);
  o.size_t0 = size(t);
  o.transitions = r.counters.total();
  o.counters = r.counters;
  o.fuel_exhausted = r.fuel_exhausted;
  o.decoded_size = decoded_size(r.final_state);
  o.state_size = state_size(r.final_state);
  if (o.decoded_size <= cfg.budget) o.normal_form = print(decode_state(r.final_state, supply, cfg.budget), namer);
  if (keep) *keep = std::move(r);
  return o;
}

Outcome run_oracle(const Term& t, const Config& cfg, NameSupply& supply, Namer& namer) {
  Derivation d = evaluate_rtl(t, cfg.fuel, supply);
  Outcome o;
  o.name = "oracle";
  o.size_t0 = size(t);
  o.transitions = d.steps.size();
  o.counters.beta = d.steps.size();
  o.fuel_exhausted = d.exhausted;
  o.decoded_size = tree_size(d.last(), cfg.budget + 1);
  o.oracle_kinds = {d.count(StepKind::BetaLambda), d.count(StepKind::BetaInert)};
  if (o.decoded_size <= cfg.budget) o.normal_form = print(d.last(), namer);
  return o;
}

Json to_json(const Outcome& o, const std::string& term) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["machine"] = o.name;
  j["term"] = term;
  j["size_t0"] = o.size_t0;
  j["transitions"] = o.transitions;
  j["beta"] = o.counters.beta;
  if (o.oracle_kinds) {
    j["beta_lambda"] = o.oracle_kinds->first;
    j["beta_inert"] = o.oracle_kinds->second;
  } else {
    j["subst"] = o.counters.subst;
    j["commutative"] = o.counters.commutative;
    Json per = Json::object();
    for (const auto& [k, v] : o.counters.per_kind) per[k] = v;
    j["per_kind"] = per;
    j["ram_cost"] = o.counters.ram_cost;
    j["state_size"] = *o.state_size;
  }
  j["fuel_exhausted"] = o.fuel_exhausted;
  if (o.normal_form) {
    j["decoded_size"] = o.decoded_size;
    j["normal_form"] = *o.normal_form;
  } else {
    j["decoded_size"] = "budget_exceeded";
    j["normal_form"] = nullptr;
  }
  return j;
}

std::string decoded_cell(const Outcome& o) {
  return o.normal_form ? std::to_string(o.decoded_size) : "budget_exceeded";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Left-aligned columns separated by two spaces.
void write_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], r[i].size());
    }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += r[i];
      if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
    }
    out << line << '\n';
  }
}

void write_rows(std::ostream& out, const std::string& format, const std::vector<std::vector<std::string>>& rows) {
  if (format == "csv") {
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_field(r[i]);
      out << '\n';
    }
  } else {
    write_table(out, rows);
  }
}

const std::vector<std::string> kStatsHeader = {"machine", "transitions", "beta", "subst", "commutative",
                                               "ram_cost", "decoded_size", "fuel_exhausted"};

std::vector<std::string> stats_row(const Outcome& o) {
  bool oracle = o.oracle_kinds.has_value();
  return {o.name,
          std::to_string(o.transitions),
          std::to_string(o.counters.beta),
          oracle ? "-" : std::to_string(o.counters.subst),
          oracle ? "-" : std::to_string(o.counters.commutative),
          oracle ? "-" : std::to_string(o.counters.ram_cost),
          decoded_cell(o),
          o.fuel_exhausted ? "yes" : "no"};
}

void emit(std::ostream& out, const Config& cfg, const std::string& text) {
  out << (cfg.golden ? normalize_primes(text) : text);
}

// ---------------------------------------------------------------------------
// Subcommands

Term read_term(const Config& cfg, std::istream& in, NameSupply& supply) {
  return parse(term_text(cfg, in), supply);
}

int cmd_run(const Config& cfg, std::istream& in, std::ostream& out) {
  NameSupply supply;
  Term t = read_term(cfg, in, supply);
  Selection sel = select(cfg.machine, "easy", true);
  Namer namer;
  const std::string term = print(t, namer);
  std::vector<Outcome> results;
  for (MachineKind m : sel.machines) results.push_back(run_one(m, t, cfg, supply, namer));
  if (sel.oracle) results.push_back(run_oracle(t, cfg, supply, namer));

  std::ostringstream text;
  if (cfg.format == "json") {
    Json j = Json::array();
    for (const auto& o : results) j.push_back(to_json(o, term));
    text << (results.size() == 1 ? j[0] : j).dump(2) << '\n';
  } else if (cfg.format == "csv") {
    std::vector<std::vector<std::string>> rows{kStatsHeader};
    rows[0].push_back("normal_form");
    for (const auto& o : results) {
      rows.push_back(stats_row(o));
      rows.back().push_back(o.normal_form.value_or(""));
    }
    write_rows(text, "csv", rows);
  } else {
    for (std::size_t i = 0; i < results.size(); ++i) {
      const Outcome& o = results[i];
      if (i) text << '\n';
      if (results.size() > 1) text << "# " << o.name << '\n';
      text << (o.normal_form ? *o.normal_form : "<decoded size exceeds budget>") << '\n';
      std::vector<std::vector<std::string>> rows;
      auto header = kStatsHeader;
      auto row = stats_row(o);
      for (std::size_t k = 1; k < header.size(); ++k)
        if (row[k] != "-") rows.push_back({header[k], row[k]});
      if (o.oracle_kinds) {
        rows.push_back({"beta_lambda", std::to_string(o.oracle_kinds->first)});
        rows.push_back({"beta_inert", std::to_string(o.oracle_kinds->second)});
      }
      write_table(text, rows);
    }
  }
  emit(out, cfg, text.str());
  for (const auto& o : results)
    if (o.fuel_exhausted) return kExitFuelExhausted;
  return 0;
}

int cmd_trace(const Config& cfg, std::istream& in, std::ostream& out) {
  NameSupply supply;
  Term t = read_term(cfg, in, supply);
  Selection sel = select(cfg.machine, "easy", false);
  std::ostringstream text;
  Json all = Json::array();
  for (std::size_t i = 0; i < sel.machines.size(); ++i) {
    MachineKind m = sel.machines[i];
    Namer namer;
    const std::string term = print(t, namer);
    std::optional<RunResult> kept;
    Outcome o = run_one(m, t, cfg, supply, namer, &kept, true);
    const RunResult& r = *kept;
    if (cfg.format == "json") {
      Json rows = Json::array();
      for (const auto& row : r.trace) {
        Json j;
        j["dump"] = format_dump(row.state.dump, namer);
        j["code"] = print(row.state.code.term(), namer);
        j["stack"] = format_stack(row.state.stack, namer);
        j["env"] = format_env(row.state.env, namer);
        j["transition"] = row.next ? Json(to_string(*row.next)) : Json(nullptr);
        rows.push_back(j);
      }
      Json j = to_json(o, term);
      j["rows"] = rows;
      all.push_back(j);
    } else if (cfg.format == "csv") {
      std::vector<std::vector<std::string>> rows;
      if (i == 0) rows.push_back({"machine", "step", "dump", "code", "stack", "env", "transition"});
      std::size_t k = 0;
      for (const auto& row : r.trace)
        rows.push_back({o.name, std::to_string(k++), format_dump(row.state.dump, namer),
                        print(row.state.code.term(), namer), format_stack(row.state.stack, namer),
                        format_env(row.state.env, namer), row.next ? to_string(*row.next) : ""});
      write_rows(text, "csv", rows);
    } else {
      if (sel.machines.size() > 1) text << (i ? "\n" : "") << "# " << o.name << '\n';
      text << "D | code | stack | env | transition\n";
      for (const auto& row : r.trace) text << format_trace_row(row, namer) << '\n';
      text << "decoded: " << (o.normal_form ? *o.normal_form : "<budget exceeded>") << '\n';
      text << "transitions " << o.transitions << ", beta " << o.counters.beta << ", subst " << o.counters.subst
           << ", commutative " << o.counters.commutative << (o.fuel_exhausted ? ", fuel exhausted" : "") << '\n';
    }
  }
  if (cfg.format == "json") text << (all.size() == 1 ? all[0] : all).dump(2) << '\n';
  emit(out, cfg, text.str());
  return 0;
}

int cmd_compare(const Config& cfg, std::istream& in, std::ostream& out) {
  NameSupply supply;
  Term t = read_term(cfg, in, supply);
  Selection sel = select(cfg.machine, "all", true);
  Namer namer;
  const std::string term = print(t, namer);
  std::vector<Outcome> results;
  for (MachineKind m : sel.machines) results.push_back(run_one(m, t, cfg, supply, namer));
  if (sel.oracle) results.push_back(run_oracle(t, cfg, supply, namer));

  std::ostringstream text;
  if (cfg.format == "json") {
    Json j = Json::array();
    for (const auto& o : results) j.push_back(to_json(o, term));
    text << j.dump(2) << '\n';
  } else {
    std::vector<std::vector<std::string>> rows{kStatsHeader};
    for (const auto& o : results) rows.push_back(stats_row(o));
    if (cfg.format != "csv") text << term << '\n';
    write_rows(text, cfg.format, rows);
  }
  emit(out, cfg, text.str());
  return 0;
}

int cmd_family(const Config& cfg, std::ostream& out) {
  NameSupply supply;
  VarId y = supply.named("y");
  Term t = Term::var(y);
  if (cfg.family == "gamma")
    t = gen_gamma(cfg.n, y);
  else if (cfg.family == "r")
    t = gen_r(cfg.n, supply);
  else if (auto f = family_from_string(cfg.family))
    t = make_family(*f, cfg.n, supply, y);
  else
    throw UsageError("unknown family " + cfg.family + " (expected t, u, s, gamma or r)");
  if (tree_size(t, cfg.budget + 1) > cfg.budget) throw UsageError("term larger than --budget");
  emit(out, cfg, print(t) + '\n');
  return 0;
}

Json report_json(const LockstepReport& r) {
  Json j;
  j["machine"] = to_string(r.machine);
  j["term"] = print(r.term);
  j["passed"] = r.passed();
  j["transitions"] = r.transitions;
  j["beta"] = r.counters.beta;
  j["beta_matched"] = r.beta_matched;
  j["oracle_length"] = r.oracle_length ? Json(*r.oracle_length) : Json(nullptr);
  j["final_shape"] = to_string(r.final_shape);
  j["degraded"] = r.degraded;
  j["decode_mismatches"] = r.decode_mismatches;
  Json inv = Json::array();
  for (const auto& v : r.invariant_violations) inv.push_back(v.invariant + ": " + v.detail);
  j["invariant_violations"] = inv;
  j["bound_violations"] = r.bound_violations;
  j["notices"] = r.notices;
  return j;
}

void describe_report(std::ostream& out, const LockstepReport& r) {
  out << to_string(r.machine) << ": " << (r.passed() ? "pass" : "FAIL") << " on " << print(r.term)
      << " (transitions " << r.transitions << ", beta " << r.counters.beta << ", oracle "
      << (r.oracle_length ? std::to_string(*r.oracle_length) : "exhausted") << ", final "
      << to_string(r.final_shape) << ")\n";
  for (const auto& s : r.decode_mismatches) out << "  decode: " << s << '\n';
  for (const auto& v : r.invariant_violations) out << "  invariant " << v.invariant << ": " << v.detail << '\n';
  for (const auto& s : r.bound_violations) out << "  bound: " << s << '\n';
  for (const auto& s : r.notices) out << "  note: " << s << '\n';
}

int cmd_verify(const Config& cfg, std::istream& in, std::ostream& out) {
  NameSupply supply;
  Selection sel = select(cfg.machine, "all", true);
  std::vector<Term> terms;
  if (cfg.corpus > 0) {
    RandomTermOptions open;
    open.free = {supply.named("a"), supply.named("b")};
    terms = normalizing_corpus(cfg.seed, cfg.corpus, supply, open);
    RandomTermOptions closed;
    closed.closed = true;
    for (auto& t : normalizing_corpus(cfg.seed + 1, (cfg.corpus + 4) / 5, supply, closed))
      terms.push_back(std::move(t));
  } else {
    terms.push_back(read_term(cfg, in, supply));
  }

  LockstepOptions options;
  options.fuel = cfg.fuel;
  options.budget = cfg.budget;
  bool ok = true;
  Json summary = Json::array();
  std::ostringstream text;
  std::vector<std::vector<std::string>> rows{{"machine", "terms", "failed", "transitions", "degraded"}};
  for (MachineKind m : sel.machines) {
    std::size_t failed = 0, degraded = 0;
    std::uint64_t transitions = 0;
    Json failures = Json::array();
    for (const auto& t : terms) {
      LockstepReport r = lockstep(t, m, supply, options);
      transitions += r.transitions;
      degraded += r.degraded;
      if (!r.passed()) {
        ++failed;
        failures.push_back(report_json(r));
      }
      if (cfg.corpus == 0 && cfg.format == "table") describe_report(text, r);
      else if (!r.passed() && cfg.format == "table") describe_report(text, r);
    }
    ok = ok && failed == 0;
    rows.push_back({to_string(m), std::to_string(terms.size()), std::to_string(failed),
                    std::to_string(transitions), std::to_string(degraded)});
    Json j;
    j["machine"] = to_string(m);
    j["terms"] = terms.size();
    j["failed"] = failed;
    j["transitions"] = transitions;
    j["degraded"] = degraded;
    j["failures"] = failures;
    summary.push_back(j);
  }
  if (cfg.format == "json") {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["seed"] = cfg.seed;
    j["passed"] = ok;
    j["machines"] = summary;
    text << j.dump(2) << '\n';
  } else {
    if (cfg.corpus > 0 && cfg.format == "table") text << "seed " << cfg.seed << '\n';
    write_rows(text, cfg.format, rows);
  }
  emit(out, cfg, text.str());
  return ok ? 0 : kExitVerifyFailure;
}

int cmd_bench(const Config& cfg, std::ostream& out) {
  auto family = family_from_string(cfg.family);
  if (!family) throw UsageError("unknown family " + cfg.family + " (expected t, u or s)");
  if (cfg.n < 1) throw UsageError("NMAX must be at least 1");
  Selection sel = select(cfg.machine, "easy+fast", false);
  NameSupply supply;
  auto rows = explosion_report(*family, cfg.n, sel.machines, supply, cfg.fuel, cfg.budget);
  std::ostringstream text;
  if (cfg.format == "csv") {
    write_explosion_csv(text, rows);
  } else if (cfg.format == "json") {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["family"] = to_string(*family);
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json e;
      e["n"] = r.n;
      e["machine"] = to_string(r.machine);
      e["size_t0"] = r.size_t0;
      e["beta"] = r.counters.beta;
      e["subst"] = r.counters.subst;
      e["commutative"] = r.counters.commutative;
      e["ram_cost"] = r.counters.ram_cost;
      e["state_size"] = r.state_size;
      e["fuel_exhausted"] = r.fuel_exhausted;
      e["decoded_size"] = r.decoded_size ? Json(*r.decoded_size) : Json("budget_exceeded");
      arr.push_back(e);
    }
    j["rows"] = arr;
    text << j.dump(2) << '\n';
  } else {
    std::ostringstream csv;
    write_explosion_csv(csv, rows);
    std::vector<std::vector<std::string>> table;
    std::string line;
    std::istringstream lines(csv.str());
    while (std::getline(lines, line)) {
      std::vector<std::string> cells;
      std::istringstream cs(line);
      std::string cell;
      while (std::getline(cs, cell, ',')) cells.push_back(cell);
      table.push_back(cells);
    }
    write_table(text, table);
  }
  out << text.str();
  return 0;
}

void add_common(CLI::App* sub, Config& cfg, bool with_term) {
  sub->add_option("--machine,-m", cfg.machine, "easy, fast, naive, oracle or all")
      ->check(CLI::IsMember({"easy", "fast", "naive", "oracle", "all"}));
  sub->add_option("--fuel", cfg.fuel, "maximum number of transitions")->capture_default_str();
  sub->add_option("--budget", cfg.budget, "largest term size decoded or printed")->capture_default_str();
  sub->add_option("--format", cfg.format, "table, json or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
  sub->add_flag("--golden", cfg.golden, "renumber generated names canonically");
  if (with_term) {
    sub->add_option("-f,--file", cfg.file, "read the term from a file (- for stdin)");
    sub->add_option("TERM", cfg.term, "term to evaluate; read from stdin when absent");
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Open call-by-value evaluation with GLAMOUr abstract machines", "fireball"};
  app.require_subcommand(1);
  Config cfg;

  auto* run = app.add_subcommand("run", "evaluate a term and print its normal form and counters");
  add_common(run, cfg, true);
  auto* trace = app.add_subcommand("trace", "print every machine state of an execution");
  add_common(trace, cfg, true);
  auto* compare = app.add_subcommand("compare", "counters of every machine and the oracle side by side");
  add_common(compare, cfg, true);
  auto* family = app.add_subcommand("family", "print a member of a term family");
  add_common(family, cfg, false);
  family->add_option("NAME", cfg.family, "t, u, s, gamma or r")->required();
  family->add_option("N", cfg.n, "index")->required();
  auto* verify = app.add_subcommand("verify", "check machines against the oracle step by step");
  add_common(verify, cfg, true);
  verify->add_option("--corpus", cfg.corpus, "check N random open terms and N/5 random closed ones");
  verify->add_option("--seed", cfg.seed, "corpus seed; FIREBALL_SEED overrides")->capture_default_str();
  auto* bench = app.add_subcommand("bench", "explosion report over a family");
  add_common(bench, cfg, false);
  bench->add_option("FAMILY", cfg.family, "t, u or s")->required();
  bench->add_option("NMAX", cfg.n, "largest index")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  if (const char* env = std::getenv("FIREBALL_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "fireball: FIREBALL_SEED is not a number: " << env << '\n';
      return static_cast<int>(CLI::ExitCodes::ValidationError);
    }
  }

  try {
    if (run->parsed()) return cmd_run(cfg, in, out);
    if (trace->parsed()) return cmd_trace(cfg, in, out);
    if (compare->parsed()) return cmd_compare(cfg, in, out);
    if (family->parsed()) return cmd_family(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, in, out);
    if (bench->parsed()) return cmd_bench(cfg, out);
  } catch (const ParseError& e) {
    err << "fireball: parse error at offset " << e.offset() << ": " << e.what() << '\n';
    return kExitParseError;
  } catch (const UsageError& e) {
    err << "fireball: " << e.what() << '\n';
    return static_cast<int>(CLI::ExitCodes::ValidationError);
  }
  return 0;
}

}  // namespace fireball
