#include "dimentropy/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "dimentropy/systems.hpp"

namespace dimentropy {

using nlohmann::json;

namespace {

const std::vector<std::string> kKinds = {"entropy", "dimensional", "growth", "lyapunov",
                                         "resolution", "certify", "skewlab", "scan"};
const std::vector<std::string> kFamilies = {"default", "chart-cube", "point", "unit-segments",
                                            "wrapped-segments", "fiber", "affine"};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error("config " + path + ": " + what);
}

void only_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) fail(path + "." + key, "unknown key");
}

template <class T>
void read(const json& j, const std::string& key, const std::string& path, T& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  const std::string p = path + "." + key;
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) fail(p, "expected a string");
  } else if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::uint64_t>) {
    if (!v.is_number_integer()) fail(p, "expected an integer");
    if constexpr (std::is_same_v<T, std::uint64_t>)
      if (v.get<std::int64_t>() < 0) fail(p, "expected a nonnegative integer");
  } else if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) fail(p, "expected a number");
  } else if constexpr (std::is_same_v<T, std::vector<double>>) {
    if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); }))
      fail(p, "expected an array of numbers");
  } else if constexpr (std::is_same_v<T, std::vector<int>>) {
    if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number_integer(); }))
      fail(p, "expected an array of integers");
  } else if constexpr (std::is_same_v<T, json>) {
    if (!v.is_object()) fail(p, "expected an object");
  }
  out = v.get<T>();
}

}  // namespace

const std::vector<std::string>& experiment_kinds() { return kKinds; }

json to_json(const ExperimentConfig& c) {
  return {{"kind", c.kind},
          {"preset", c.preset},
          {"system", {{"name", c.system.name}, {"params", c.system.params}}},
          {"family", {{"kind", c.family.kind}, {"params", c.family.params}}},
          {"estimator",
           {{"eps", c.estimator.eps},
            {"n_max", c.estimator.n_max},
            {"horizons", c.estimator.horizons},
            {"max_cloud", c.estimator.max_cloud},
            {"tolerance", c.estimator.tolerance},
            {"k", c.estimator.k},
            {"r", c.estimator.r}}},
          {"options", c.options},
          {"output", {{"dir", c.output.dir}, {"prefix", c.output.prefix}}},
          {"seed", c.seed},
          {"workers", c.workers},
          {"budget_mb", c.budget_mb}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  only_keys(j, "$", {"kind", "preset", "system", "family", "estimator", "options", "output", "seed", "workers", "budget_mb", "$schema"});
  read(j, "kind", "$", c.kind);
  if (std::find(kKinds.begin(), kKinds.end(), c.kind) == kKinds.end()) fail("$.kind", "unknown experiment kind '" + c.kind + "'");
  read(j, "preset", "$", c.preset);
  if (j.contains("system")) {
    const json& s = j.at("system");
    only_keys(s, "$.system", {"name", "params"});
    read(s, "name", "$.system", c.system.name);
    read(s, "params", "$.system", c.system.params);
  }
  if (j.contains("family")) {
    const json& f = j.at("family");
    only_keys(f, "$.family", {"kind", "params"});
    read(f, "kind", "$.family", c.family.kind);
    if (std::find(kFamilies.begin(), kFamilies.end(), c.family.kind) == kFamilies.end())
      fail("$.family.kind", "unknown family kind '" + c.family.kind + "'");
    read(f, "params", "$.family", c.family.params);
  }
  if (j.contains("estimator")) {
    const json& e = j.at("estimator");
    only_keys(e, "$.estimator", {"eps", "n_max", "horizons", "max_cloud", "tolerance", "k", "r"});
    read(e, "eps", "$.estimator", c.estimator.eps);
    read(e, "n_max", "$.estimator", c.estimator.n_max);
    read(e, "horizons", "$.estimator", c.estimator.horizons);
    read(e, "max_cloud", "$.estimator", c.estimator.max_cloud);
    read(e, "tolerance", "$.estimator", c.estimator.tolerance);
    read(e, "k", "$.estimator", c.estimator.k);
    read(e, "r", "$.estimator", c.estimator.r);
    if (c.estimator.eps.empty()) fail("$.estimator.eps", "must not be empty");
    for (double x : c.estimator.eps)
      if (!(x > 0.0)) fail("$.estimator.eps", "radii must be positive");
    if (c.estimator.n_max < 1) fail("$.estimator.n_max", "must be >= 1");
    if (c.estimator.max_cloud < 1) fail("$.estimator.max_cloud", "must be >= 1");
    if (c.estimator.r < 1) fail("$.estimator.r", "must be >= 1");
  }
  read(j, "options", "$", c.options);
  if (j.contains("output")) {
    const json& o = j.at("output");
    only_keys(o, "$.output", {"dir", "prefix"});
    read(o, "dir", "$.output", c.output.dir);
    read(o, "prefix", "$.output", c.output.prefix);
  }
  read(j, "seed", "$", c.seed);
  read(j, "workers", "$", c.workers);
  read(j, "budget_mb", "$", c.budget_mb);
  if (c.workers < 0) fail("$.workers", "must be >= 0");
  if (c.budget_mb < 1) fail("$.budget_mb", "must be >= 1");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error("config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

json config_schema() {
  auto integer = [](json extra = json::object()) {
    json j{{"type", "integer"}};
    j.update(extra);
    return j;
  };
  auto object_of = [](json props) {
    return json{{"type", "object"}, {"additionalProperties", false}, {"properties", std::move(props)}};
  };
  return {
      {"$schema", "https://json-schema.org/draft/2020-12/schema"},
      {"title", "dimentropy experiment configuration"},
      {"type", "object"},
      {"additionalProperties", false},
      {"properties",
       {{"$schema", {{"type", "string"}}},
        {"kind", {{"enum", kKinds}}},
        {"preset", {{"type", "string"}}},
        {"system", object_of({{"name", {{"type", "string"}}}, {"params", {{"type", "object"}}}})},
        {"family", object_of({{"kind", {{"enum", kFamilies}}}, {"params", {{"type", "object"}}}})},
        {"estimator",
         object_of({{"eps", {{"type", "array"}, {"minItems", 1}, {"items", {{"type", "number"}, {"exclusiveMinimum", 0}}}}},
                    {"n_max", integer({{"minimum", 1}})},
                    {"horizons", {{"type", "array"}, {"items", {{"type", "integer"}}}}},
                    {"max_cloud", integer({{"minimum", 1}})},
                    {"tolerance", {{"type", "number"}}},
                    {"k", integer({{"minimum", -1}})},
                    {"r", integer({{"minimum", 1}})}})},
        {"options", {{"type", "object"}}},
        {"output", object_of({{"dir", {{"type", "string"}}}, {"prefix", {{"type", "string"}}}})},
        {"seed", integer({{"minimum", 0}})},
        {"workers", integer({{"minimum", 0}})},
        {"budget_mb", integer({{"minimum", 1}})}}}};
}

}  // namespace dimentropy
