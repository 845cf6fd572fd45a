#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "commands.hpp"
#include "levylap/errors.hpp"

using namespace levylap;
using namespace levylap::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("levylap_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(LEVYLAP_TOOL) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config round trip and hash") {
  ExperimentConfig cfg;
  cfg.connection.kind = "sd";
  cfg.curves.seed = 99;
  cfg.rotation.profiles = {"t", "sin2"};
  cfg.numerics.estimator = CesaroEstimator::kIncrementTail;
  const json j = config_to_json(cfg);
  const ExperimentConfig back = config_from_json(j);
  CHECK(config_to_json(back) == j);
  CHECK(config_hash(back) == config_hash(cfg));
  CHECK(config_hash(cfg).size() == 16);
  CHECK(config_hash(cfg) != config_hash(ExperimentConfig{}));
  // Key order in the source document does not matter.
  const json a = json::parse(R"({"metric": {"alpha": 0.2, "kind": "conformal"}, "curves": {"seed": 3}})");
  const json b = json::parse(R"({"curves": {"seed": 3}, "metric": {"kind": "conformal", "alpha": 0.2}})");
  CHECK(config_hash(config_from_json(a)) == config_hash(config_from_json(b)));
  // FNV-1a reference values.
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"connection": {"knd": "asd"}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"geometry": {}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"numerics": {"modes": "many"}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"numerics": {"modes": 0}})")), ConfigError);
  try {
    config_from_json(json::parse(R"({"rotation": {"factr": "left"}})"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("rotation.factr") != std::string::npos);
  }
}

TEST_CASE("number formatting and CSV") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 8.0}) CHECK(std::stod(format_number(x)) == x);
  CHECK(format_number(0.1) == "0.10000000000000001");
  CsvTable t({"id", "value"});
  t.add({"left:t,t2", format_number(1.5)});
  t.add({"say \"hi\"", "2"});
  CHECK(t.str() == "id,value\n\"left:t,t2\",1.5\n\"say \"\"hi\"\"\",2\n");
  CHECK_THROWS(t.add({"only one"}));
}

TEST_CASE("exit codes") {
  CHECK(exit_code("pass") == 0);
  CHECK(exit_code("hypothesis_not_met") == 0);
  CHECK(exit_code("fail") == 1);
}

TEST_CASE("basis-check command") {
  ExperimentConfig cfg;
  const CommandOutput out = run_basis_check(cfg, BasisCheckOptions{});
  CHECK(out.status == "pass");
  REQUIRE(!out.tables.empty());
  CHECK(out.tables.front().second.rows() == 4);
}

TEST_CASE("theorem reports are deterministic apart from the timestamp") {
  const fs::path dir = scratch_dir("determinism");
  ExperimentConfig cfg;
  const json a = write_outputs("theorem", cfg, run_theorem(cfg), dir.string(), "2000-01-01T00:00:00Z");
  const std::string first = slurp(dir / "theorem.json");
  const json b = write_outputs("theorem", cfg, run_theorem(cfg), dir.string(), "2001-01-01T00:00:00Z");
  CHECK(without_timestamp(a) == without_timestamp(b));
  CHECK(without_timestamp(a).dump() == without_timestamp(b).dump());
  CHECK(first != slurp(dir / "theorem.json"));
  CHECK(a["manifest"]["config_hash"] == config_hash(cfg));
  CHECK(a["result"]["outcome"] == "exclusive_or");
  fs::remove_all(dir);
}

TEST_CASE("command-line tool") {
  const fs::path dir = scratch_dir("tool");
  const std::string out = " --out " + (dir / "out").string();
  CHECK(run_tool("levy --connection flat --w left:t,t2 --curve poly-0" + out) == 0);
  const json levy = json::parse(slurp(dir / "out" / "levy.json"));
  CHECK(levy["status"] == "pass");
  CHECK(levy["result"]["reports"][0]["closed_form"]["norm"].get<double>() == 0.0);
  CHECK(run_tool("theorem --connection asd --factor both --curves standard --seed 7" + out) == 0);
  CHECK(run_tool("theorem --connection asd --profiles t" + out) == 0);
  CHECK(json::parse(slurp(dir / "out" / "theorem.json"))["status"] == "hypothesis_not_met");
  CHECK(run_tool("basis-check --basis sine --n 8,16,32,64 --weight t" + out) == 0);
  CHECK(fs::exists(dir / "out" / "basis-check.csv"));

  std::ofstream(dir / "bad.json") << R"({"connection": {"kind": "asd", "colour": 1}})";
  CHECK(run_tool("theorem --config " + (dir / "bad.json").string() + out) == 2);
  CHECK(run_tool("theorem --connection nonsense" + out) == 2);
  CHECK(run_tool("theorem --modes -3" + out) == 2);
  CHECK(run_tool("frobnicate" + out) == 2);

  const fs::path emitted = dir / "nested" / "cfg.json";
  CHECK(run_tool("theorem --seed 11 --emit-config " + emitted.string() + out) == 0);
  const ExperimentConfig reloaded = load_config(emitted.string());
  CHECK(reloaded.curves.seed == 11);
  fs::remove_all(dir);
}
