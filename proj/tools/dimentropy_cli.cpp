// Batch driver: one experiment per invocation.
// Exit status: 0 done, 1 hard error, 2 invalid config, 3 partial results.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "dimentropy/config.hpp"
#include "dimentropy/experiments.hpp"
#include "dimentropy/systems.hpp"

namespace {

using dimentropy::ExperimentConfig;
using nlohmann::json;

struct Overrides {
  std::string config_path;
  std::string system;
  std::string params;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> budget_mb;
};

ExperimentConfig resolve(const std::string& kind, const std::string& preset, const Overrides& o) {
  ExperimentConfig c;
  if (!preset.empty()) {
    c = dimentropy::preset_config(preset);
  } else if (!o.config_path.empty()) {
    c = dimentropy::load_config(o.config_path);
    if (c.kind != kind) throw dimentropy::Error("config $.kind: '" + c.kind + "' does not match subcommand '" + kind + "'");
  } else {
    c.kind = kind;
  }
  if (!o.system.empty()) c.system.name = o.system;
  if (!o.params.empty()) {
    try {
      c.system.params = json::parse(o.params);
    } catch (const json::parse_error& e) {
      throw dimentropy::Error(std::string("config --params: ") + e.what());
    }
  }
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.out_dir) c.output.dir = *o.out_dir;
  if (o.budget_mb) c.budget_mb = *o.budget_mb;
  // Re-validate the merged config so overrides obey the same schema.
  return dimentropy::config_from_json(dimentropy::to_json(c));
}

int run(const std::string& kind, const std::string& preset, const Overrides& o) {
  ExperimentConfig c;
  try {
    c = resolve(kind, preset, o);
  } catch (const std::exception& e) {
    std::cerr << "dimentropy: " << e.what() << "\n";
    return 2;
  }
  try {
    const dimentropy::RunResult r = dimentropy::run_experiment(c);
    std::cout << r.header << r.csv;
    for (const auto& a : r.artifacts) std::cerr << "wrote " << a << "\n";
    return r.status;
  } catch (const std::exception& e) {
    std::cerr << "dimentropy: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dimensional entropy experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config_path, "experiment config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--system", o.system, "catalog system name");
  app.add_option("--params", o.params, "system parameters as a JSON object");
  app.add_option("--seed", o.seed, "rng seed");
  app.add_option("--workers", o.workers, "worker threads (0: machine parallelism)");
  app.add_option("--out-dir", o.out_dir, "artifact directory");
  app.add_option("--budget-mb", o.budget_mb, "orbit storage budget");

  app.add_subcommand("list-systems", "print the system catalog as JSON")->callback([] {
    std::cout << dimentropy::catalog_manifest().dump(2) << "\n";
  });
  app.add_subcommand("schema", "print the config schema")->callback([] {
    std::cout << dimentropy::config_schema().dump(2) << "\n";
  });
  int status = 0;
  for (const std::string& kind : dimentropy::experiment_kinds())
    app.add_subcommand(kind, "run a " + kind + " experiment")->callback([&status, &o, kind] { status = run(kind, "", o); });

  std::string preset;
  auto* p = app.add_subcommand("preset", "run a named preset");
  p->add_option("name", preset, "preset name")->required()->check(CLI::IsMember(dimentropy::preset_names()));
  p->callback([&] { status = run("", preset, o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  return status;
}
