#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "dimentropy/config.hpp"
#include "dimentropy/experiments.hpp"

using namespace dimentropy;
using nlohmann::json;

namespace {

ExperimentConfig small_entropy() {
  ExperimentConfig c;
  c.kind = "entropy";
  c.system = {"cat", json::object()};
  c.estimator.eps = {0.1, 0.05};
  c.estimator.n_max = 5;
  c.estimator.max_cloud = 4096;
  c.seed = 9;
  return c;
}

int cli(const std::string& args) {
  const char* exe = std::getenv("DIMENTROPY_CLI");
  REQUIRE(exe != nullptr);
  const int raw = std::system((std::string(exe) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dimentropy_test_cli";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("config round trip") {
  ExperimentConfig c = small_entropy();
  c.family = {"unit-segments", {{"directions", 3}}};
  c.options = {{"anything", {1, 2, 3}}};
  c.output = {"/tmp/x", "p"};
  c.workers = 2;
  c.budget_mb = 77;
  const json j = to_json(c);
  CHECK(to_json(config_from_json(j)) == j);
  CHECK(to_json(config_from_json(json::parse(j.dump()))) == j);
}

TEST_CASE("schema violations name the offending path") {
  auto message = [](const json& j) {
    try {
      config_from_json(j);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message({{"kind", "entropy"}, {"bogus", 1}}).find("$.bogus") != std::string::npos);
  CHECK(message({{"kind", "nope"}}).find("$.kind") != std::string::npos);
  CHECK(message({{"estimator", {{"eps", {-0.1}}}}}).find("$.estimator.eps") != std::string::npos);
  CHECK(message({{"estimator", {{"n_max", "12"}}}}).find("$.estimator.n_max") != std::string::npos);
  CHECK(message({{"family", {{"kind", "blob"}}}}).find("$.family.kind") != std::string::npos);
  CHECK(message({{"kind", "entropy"}}).empty());
}

TEST_CASE("runs are deterministic and embed their config") {
  const ExperimentConfig c = small_entropy();
  const RunResult a = run_experiment(c, false);
  const RunResult b = run_experiment(c, false);
  CHECK(a.csv == b.csv);
  CHECK(a.header == b.header);
  CHECK(a.result["config"] == to_json(c));
  CHECK(a.header.rfind("# ", 0) == 0);

  ExperimentConfig l;
  l.kind = "lyapunov";
  l.system = {"coupled_quadratic", json::object()};
  l.options = {{"n", 2000}, {"seeds", 2}};
  l.estimator.eps = {0.1};
  l.estimator.n_max = 5;
  l.estimator.max_cloud = 4096;
  l.seed = 5;
  CHECK(run_experiment(l, false).csv == run_experiment(l, false).csv);
  l.workers = 1;
  const std::string one = run_experiment(l, false).csv;
  l.workers = 2;
  CHECK(run_experiment(l, false).csv == one);
}

TEST_CASE("artifacts") {
  ExperimentConfig c = small_entropy();
  c.output.dir = scratch("artifacts").string();
  const RunResult r = run_experiment(c);
  REQUIRE(r.artifacts.size() == 2);
  std::ifstream js(r.artifacts[1]);
  const json j = json::parse(js);
  CHECK(config_from_json(j["config"]).system.name == "cat");
}

TEST_CASE("presets describe themselves") {
  for (const std::string& name : preset_names()) {
    const ExperimentConfig c = preset_config(name);
    CHECK(c.preset == name);
    CHECK(to_json(config_from_json(to_json(c))) == to_json(c));
  }
  CHECK_THROWS_AS(preset_config("nope"), Error);
}

TEST_CASE("command-line exit codes") {
  CHECK(cli("list-systems") == 0);
  CHECK(cli("schema") == 0);
  const auto bad = scratch("bad.json");
  std::ofstream(bad) << R"({"kind": "entropy", "estimator": {"eps": []}})";
  CHECK(cli("entropy --config " + bad.string()) == 2);
  CHECK(cli("preset no-such-preset") == 2);
  CHECK(cli("entropy --system no_such_system --out-dir " + scratch("o").string()) == 1);

  const auto good = scratch("good.json");
  ExperimentConfig c = small_entropy();
  c.output.dir = scratch("run").string();
  std::ofstream(good) << to_json(c).dump();
  CHECK(cli("entropy --config " + good.string()) == 0);
  CHECK(cli("growth --config " + good.string()) == 2);

  const json saturating = {{"kind", "entropy"},
                           {"system", {{"name", "logistic"}}},
                           {"estimator", {{"eps", {0.05}}, {"n_max", 6}, {"max_cloud", 16}}},
                           {"output", {{"dir", scratch("partial").string()}}}};
  const auto part = scratch("partial.json");
  std::ofstream(part) << saturating.dump();
  CHECK(cli("entropy --config " + part.string()) == 3);
}
