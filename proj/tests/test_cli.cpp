#include <doctest.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fireball/cli.hpp"

using namespace fireball;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "fireball");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string golden(const std::string& name) {
  std::ifstream f(std::string(FIREBALL_GOLDEN_DIR) + "/" + name);
  REQUIRE(f);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

const std::string kExample = "(\\z.z (y z)) \\x.x";

}  // namespace

TEST_CASE("trace reproduces the golden tables") {
  CHECK(cli({"trace", kExample, "--golden"}).out == golden("ex2_easy.txt"));
  CHECK(cli({"trace", kExample, "--machine", "fast", "--golden"}).out == golden("ex3_fast.txt"));
}

TEST_CASE("golden trace rows") {
  std::string out = cli({"trace", kExample, "--golden"}).out;
  CHECK(out.find("ε | \\x''.x'' | <y,(<\\x'.x',ε>)> | [z<-<\\x.x,ε>] | m\n") != std::string::npos);
  CHECK(out.find("transitions 10, beta 2, subst 2, commutative 6") != std::string::npos);
}

TEST_CASE("run prints the normal form") {
  Result r = cli({"run", "y"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("y\n", 0) == 0);
  CHECK(r.out.find("transitions     0") != std::string::npos);
  Result e = cli({"run", kExample, "-m", "oracle"});
  CHECK(e.out.rfind("y \\x.x\n", 0) == 0);
  CHECK(e.out.find("beta_inert") != std::string::npos);
}

TEST_CASE("run reads stdin and files") {
  CHECK(cli({"run"}, "(\\x.x) y").out.rfind("y\n", 0) == 0);
  CHECK(cli({"run", "-f", "-"}, "(\\x.x) w").out.rfind("w\n", 0) == 0);
  std::string path = "cli_test_term.txt";
  {
    std::ofstream f(path);
    f << "(\\x.x x) v\n";
  }
  CHECK(cli({"run", "-f", path}).out.rfind("v v\n", 0) == 0);
  std::remove(path.c_str());
}

TEST_CASE("run JSON stats are stable-keyed") {
  Result r = cli({"run", kExample, "--format", "json"});
  auto j = nlohmann::ordered_json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["machine"] == "easy");
  CHECK(j["beta"] == 2);
  CHECK(j["subst"] == 2);
  CHECK(j["per_kind"]["c1"] == 3);
  CHECK(j["decoded_size"] == 4);
  CHECK(j.begin().key() == "schema_version");
  Result all = cli({"run", kExample, "--format", "json", "-m", "all"});
  CHECK(nlohmann::json::parse(all.out).size() == 4);
}

TEST_CASE("exit codes") {
  CHECK(cli({"run", "(\\x."}).code == kExitParseError);
  CHECK(cli({"run", "(\\x.x x) (\\x.x x)", "--fuel", "100"}).code == kExitFuelExhausted);
  CHECK(cli({"run", "y", "--machine", "nope"}).code != 0);
  CHECK(cli({"trace", "y", "--machine", "oracle"}).code != 0);
  CHECK(cli({}).code != 0);
  Result err = cli({"run", "x )"});
  CHECK(err.err.find("offset 2") != std::string::npos);
}

TEST_CASE("run reports oversized results") {
  Result r = cli({"run", "--machine", "fast", "--budget", "100"}, "(\\x.(\\x'.\\y'.y' x' x') \\y''.y'' x x) \\z.z");
  CHECK(r.code == 0);
  Result big = cli({"run", "-m", "fast", "--budget", "5", "--format", "json"}, "(\\x.\\y.y x x) \\z.z");
  CHECK(nlohmann::json::parse(big.out)["decoded_size"] == "budget_exceeded");
}

TEST_CASE("compare lists every machine and the oracle") {
  Result r = cli({"compare", kExample, "--format", "csv"});
  CHECK(r.out.find("easy,10,2,2,6,") != std::string::npos);
  CHECK(r.out.find("fast,9,2,1,6,") != std::string::npos);
  CHECK(r.out.find("naive,13,2,3,8,") != std::string::npos);
  CHECK(r.out.find("oracle,2,2,-,-,-,4,no") != std::string::npos);
}

TEST_CASE("family prints generated terms") {
  CHECK(cli({"family", "t", "1"}).out == "(\\x.x x) y\n");
  CHECK(cli({"family", "gamma", "2"}).out == "y y (y y)\n");
  CHECK(cli({"family", "u", "2", "--golden"}).out == "(\\x.y x x) \\x'.y x' x'\n");
  CHECK(cli({"family", "nope", "2"}).code != 0);
}

TEST_CASE("verify") {
  Result one = cli({"verify", kExample});
  CHECK(one.code == 0);
  CHECK(one.out.find("easy: pass") != std::string::npos);
  Result corpus = cli({"verify", "--corpus", "50", "--seed", "3"});
  CHECK(corpus.code == 0);
  CHECK(corpus.out.find("seed 3") != std::string::npos);
  Result json = cli({"verify", "--corpus", "20", "--format", "json"});
  auto j = nlohmann::json::parse(json.out);
  CHECK(j["passed"] == true);
  CHECK(j["machines"].size() == 3);
  // A diverging term never reaches a final state.
  CHECK(cli({"verify", "(\\x.x x) (\\x.x x)", "--fuel", "100"}).code == kExitVerifyFailure);
}

TEST_CASE("FIREBALL_SEED overrides --seed") {
  setenv("FIREBALL_SEED", "12", 1);
  Result r = cli({"verify", "--corpus", "5", "--seed", "3"});
  unsetenv("FIREBALL_SEED");
  CHECK(r.out.find("seed 12") != std::string::npos);
}

TEST_CASE("bench") {
  Result r = cli({"bench", "u", "20", "--format", "csv"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "family,n,machine,size_t0,beta,subst,commutative,ram_cost,state_size,decoded_size_or_flag");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    if (line.find(",fast,") != std::string::npos) CHECK(line.find(",1,0,") != std::string::npos);
  }
  CHECK(rows == 40);
  auto j = nlohmann::json::parse(cli({"bench", "s", "3", "-m", "fast", "--format", "json"}).out);
  CHECK(j["rows"].size() == 3);
  CHECK(cli({"bench", "s", "2"}).out.find("decoded_size_or_flag") != std::string::npos);
}
