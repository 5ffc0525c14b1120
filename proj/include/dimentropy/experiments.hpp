#pragma once

// Experiment runner behind the CLI: builds systems and families from a
// config, runs one experiment kind, and renders CSV and JSON artifacts.

#include <string>
#include <vector>

#include <json.hpp>

#include "dimentropy/config.hpp"
#include "dimentropy/entropies.hpp"
#include "dimentropy/lyapunov.hpp"
#include "dimentropy/systems.hpp"

namespace dimentropy {

DiskFamily make_family(const SmoothMap& f, const FamilySpec& spec, int k);
EntropySchedule make_schedule(const ExperimentConfig& c);

// Best available entropy value: closed form where known, otherwise the chart-cube covering estimate.
EntropyValue reference_entropy(const SmoothMap& f, const EntropySchedule& schedule);
// Closed-form bound on H^k, when one is known (toral maps: sum of the k largest log|eigenvalue|^+).
std::optional<UpperBound> analytic_hk_upper(const SmoothMap& f, int k);

struct TorusGapOptions {
  int directions = 8;
  std::vector<double> lengths = {64.0, 256.0, 1024.0};
  std::vector<double> eps = {0.1, 0.05, 0.02};
  int unit_n_max = 12;
  int wrapped_n_max = 5;
  std::size_t unit_cloud = std::size_t{1} << 18;
  std::size_t wrapped_cloud = 2800000;
};

struct TorusGapReport {
  DimensionalEntry unit;
  DimensionalEntry wrapped;
  double log3 = 0.0, log6 = 0.0;
};

TorusGapReport torus_gap(const TorusGapOptions& options = {});

struct RunResult {
  int status = 0;  // 0 done, 3 partial
  bool partial = false;
  std::string header;  // comment lines, each starting with "# "
  std::string csv;     // header row and body
  nlohmann::json result;
  std::vector<std::string> artifacts;
};

// Runs the experiment; writes <dir>/<prefix>.csv and .json when `write` is set.
RunResult run_experiment(const ExperimentConfig& config, bool write = true);

const std::vector<std::string>& preset_names();
ExperimentConfig preset_config(const std::string& name);

}  // namespace dimentropy
