#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "qamp/corpus.hpp"
#include "qamp/qsat.hpp"

namespace {

#ifndef QAMP_CLI_PATH
#define QAMP_CLI_PATH ""
#endif

std::string cli_path() {
  if (const char* p = std::getenv("QAMP_CLI_OVERRIDE")) return p;
  std::string built = QAMP_CLI_PATH;
  REQUIRE(!built.empty());
  return built;
}

std::string work_dir() {
  static std::string dir = [] {
    std::string d = "/tmp/qamp_cli_test";
    int rc = std::system(("rm -rf " + d + " && mkdir -p " + d).c_str());
    (void)rc;
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  std::string cmd = cli_path() + " " + args;
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json slurp_json(const std::string& path) {
  return nlohmann::json::parse(slurp(path));
}

std::string drop_wall_seconds(std::string text) {
  auto j = nlohmann::json::parse(text);
  j.erase("wall_seconds");
  return j.dump(2);
}

}  // namespace

TEST_CASE("gen and validate round trip") {
  auto inst = work_dir() + "/chain.json";
  CHECK(run("gen --type rank1-chain --n 5 --seed 3 --out " + inst) == 0);
  auto rep = work_dir() + "/validate.json";
  CHECK(run("validate --instance " + inst + " --out " + rep) == 0);
  auto j = slurp_json(rep);
  CHECK(j["pass"] == true);
  CHECK(j["schema"] == "qamp-report-1");
  CHECK(j["issues"].empty());
}

TEST_CASE("validate flags a broken instance with exit 1") {
  auto sys = qamp::corpus::rank1_chain(4, false, 5);
  sys.constraints[0].projector(0, 0) += 0.5;  // no longer idempotent
  auto path = work_dir() + "/broken.json";
  std::ofstream(path) << qamp::qsat::save_instance(sys);
  auto rep = work_dir() + "/broken_report.json";
  CHECK(run("validate --instance " + path + " --out " + rep) == 1);
  CHECK(slurp_json(rep)["pass"] == false);
}

TEST_CASE("config errors exit with code 2") {
  CHECK(run("no-such-command 2> /dev/null") == 2);
  CHECK(run("validate --instance /nonexistent.json 2> /dev/null") == 2);
  CHECK(run("gen --type bogus 2> /dev/null") == 2);
}

TEST_CASE("layers reports the greedy layering") {
  auto inst = work_dir() + "/chain6.json";
  REQUIRE(run("gen --type rank1-chain --n 6 --seed 4 --out " + inst) == 0);
  auto rep = work_dir() + "/layers.json";
  CHECK(run("layers --instance " + inst + " --out " + rep) == 0);
  auto j = slurp_json(rep);
  CHECK(j["g"] == 2);
  CHECK(j["layers"].size() == 2);
}

TEST_CASE("theta on a diagonal instance is exactly zero and exact") {
  auto inst = work_dir() + "/diag.json";
  REQUIRE(run("gen --type diagonal-neq --graph k4 --out " + inst) == 0);
  auto rep = work_dir() + "/theta.json";
  CHECK(run("theta --instance " + inst + " --out " + rep) == 0);
  auto j = slurp_json(rep);
  CHECK(j["theta"] == 0.0);
  CHECK(j["theta_exact"] == true);
  CHECK(j["f1"].get<int>() >= 1);
}

TEST_CASE("ground of a satisfiable chain is zero") {
  auto inst = work_dir() + "/chain5.json";
  REQUIRE(run("gen --type rank1-chain --n 5 --seed 6 --out " + inst) == 0);
  auto rep = work_dir() + "/ground.json";
  CHECK(run("ground --instance " + inst + " --out " + rep) == 0);
  CHECK(slurp_json(rep)["epsilon0"] == 0.0);
}

TEST_CASE("decay and detect sweeps pass on a chain instance") {
  auto inst = work_dir() + "/chain8.json";
  REQUIRE(run("gen --type rank1-chain --n 8 --seed 8 --out " + inst) == 0);
  auto rep = work_dir() + "/decay.json";
  CHECK(run("decay --instance " + inst + " --trials 5 --out " + rep) == 0);
  auto j = slurp_json(rep);
  CHECK(j["pass"] == true);
  CHECK(j["rows"].size() == 5);
  auto drep = work_dir() + "/detect.json";
  CHECK(run("detect --instance " + inst + " --trials 5 --out " + drep) == 0);
  CHECK(slurp_json(drep)["pass"] == true);
}

TEST_CASE("detect reports invalid regimes without failing") {
  auto inst = work_dir() + "/diag2.json";
  REQUIRE(run("gen --type diagonal-neq --graph k4 --out " + inst) == 0);
  auto rep = work_dir() + "/detect_ell2.json";
  CHECK(run("detect --instance " + inst + " --ell 2 --out " + rep) == 0);
  auto j = slurp_json(rep);
  CHECK(j["regime_valid"] == false);
  CHECK(j["pass"] == true);
}

TEST_CASE("kitaev on a two-layer chain") {
  auto inst = work_dir() + "/chain4.json";
  REQUIRE(run("gen --type rank1-chain --n 4 --seed 9 --out " + inst) == 0);
  auto rep = work_dir() + "/kitaev.json";
  CHECK(run("kitaev --instance " + inst + " --out " + rep) == 0);
  CHECK(slurp_json(rep)["pass"] == true);
}

TEST_CASE("camp reports are deterministic and all rows pass") {
  auto rep1 = work_dir() + "/camp1.json";
  auto rep2 = work_dir() + "/camp2.json";
  std::string args = "camp --graph k4 --t 4 --trials 50 --seed 7 --out ";
  CHECK(run(args + rep1) == 0);
  CHECK(run(args + rep2) == 0);
  CHECK(drop_wall_seconds(slurp(rep1)) == drop_wall_seconds(slurp(rep2)));
  auto j = slurp_json(rep1);
  CHECK(j["pass"] == true);
  CHECK(j["rows"].size() == 50);
  for (const auto& row : j["rows"]) CHECK(row["pass"] == true);
}

TEST_CASE("csv output carries a header naming every column") {
  auto rep = work_dir() + "/camp.csv";
  CHECK(run("camp --graph k4 --t 2 --trials 3 --format csv --out " + rep) ==
        0);
  auto text = slurp(rep);
  auto header = text.substr(0, text.find('\n'));
  for (const char* col : {"trial", "unsat_g", "unsat_gt", "rhs", "pass"})
    CHECK(header.find(col) != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') >= 4);  // header + 3 rows
}

TEST_CASE("moments command passes on k4") {
  auto rep = work_dir() + "/moments.json";
  CHECK(run("moments --graph k4 --t 3 --trials 5 --out " + rep) == 0);
  CHECK(slurp_json(rep)["pass"] == true);
}

TEST_CASE("qamp command on the diagonal toy") {
  auto rep = work_dir() + "/qamp.json";
  CHECK(run("qamp --graph k4 --type diagonal-neq --t 2 --out " + rep) == 0);
  auto j = slurp_json(rep);
  CHECK(j["pass"] == true);
  CHECK(j["params"]["theta"] == 0.0);
  CHECK(j["sector_eq_error"].get<double>() <= 1e-9);
}

TEST_CASE("gen random-regular emits a graph file") {
  auto path = work_dir() + "/graph.json";
  CHECK(run("gen --type random-regular --n 8 --d 3 --seed 11 --out " + path) ==
        0);
  auto j = slurp_json(path);
  CHECK(j["n"] == 8);
  CHECK(j["edges"].size() == 12);
}
