#pragma once

// Experiment configuration: JSON in, JSON out, validated strictly (unknown
// keys and wrong types are errors).

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace dimentropy {

struct SystemSpec {
  std::string name = "logistic";
  nlohmann::json params = nlohmann::json::object();
};

// kind: default | chart-cube | point | unit-segments | wrapped-segments |
// fiber | affine. Parameters depend on the kind.
struct FamilySpec {
  std::string kind = "default";
  nlohmann::json params = nlohmann::json::object();
};

struct EstimatorSpec {
  std::vector<double> eps = {0.1, 0.05, 0.02};
  int n_max = 12;
  std::vector<int> horizons;  // resolution / periodic horizons; empty picks defaults
  std::uint64_t max_cloud = std::uint64_t{1} << 20;
  double tolerance = 0.1;
  int k = -1;  // disk dimension; -1 means every k (dimensional) or 1
  int r = 1;
};

struct OutputSpec {
  std::string dir = "out";
  std::string prefix;  // empty: the experiment kind or preset name
};

struct ExperimentConfig {
  std::string kind = "entropy";  // entropy | dimensional | growth | lyapunov | resolution | certify | skewlab | scan
  std::string preset;            // set when the config came from a preset
  SystemSpec system;
  FamilySpec family;
  EstimatorSpec estimator;
  nlohmann::json options = nlohmann::json::object();  // kind-specific
  OutputSpec output;
  std::uint64_t seed = 1;
  int workers = 0;
  std::uint64_t budget_mb = 1024;
};

const std::vector<std::string>& experiment_kinds();

nlohmann::json to_json(const ExperimentConfig& c);
// Throws Error with the offending path on schema violations.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Schema document shipped with the repository (schemas/experiment_config.schema.json).
nlohmann::json config_schema();

}  // namespace dimentropy
