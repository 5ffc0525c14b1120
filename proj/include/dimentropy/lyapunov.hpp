#pragma once

// Lyapunov spectra along orbits and the Ruelle-type inequality checks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimentropy/systems.hpp"

namespace dimentropy {

struct LyapunovOptions {
  int reorthogonalize_every = 1;
  double log_clamp = -50.0;
  double unreliable_fraction = 1e-3;  // singular hits above this share mark the run unreliable
};

struct LyapunovSpectrum {
  std::vector<double> exponents;  // descending
  int orbit_length = 0;
  int transient = 0;
  Point basepoint;
  std::vector<double> drift;  // |lambda_i(n) - lambda_i(3n/4)|
  double log_det_average = 0.0;  // orbit mean of log|det Df|, same clamp
  std::uint64_t singular_hits = 0;
  bool reliable = true;

  double sum() const;
  double positive_sum(std::size_t from = 0) const;  // sum of lambda_i^+ for i >= from
};

LyapunovSpectrum lyapunov_spectrum(const SmoothMap& f, const Point& x0, int n, int transient,
                                   const LyapunovOptions& options = {});

// Uniform random point of the fundamental domain.
Point random_point(const ManifoldModel& m, std::uint64_t seed);

// Independent runs from `seeds` random basepoints derived from `seed`.
std::vector<LyapunovSpectrum> seed_runs(const SmoothMap& f, int seeds, std::uint64_t seed, int n, int transient,
                                        int workers = 0);

enum class Provenance { Analytic, BranchCountOracle, CoveringEstimate };
std::string to_string(Provenance p);

struct EntropyValue {
  double value = 0.0;
  Provenance provenance = Provenance::Analytic;
  double tolerance = 0.02;
  std::string note;
};

struct UpperBound {
  double value = 0.0;
  std::string source;  // "analytic", "lambda_k_norm", ...
};

struct MarginReport {
  std::string check;
  int k = 0;
  double h = 0.0;
  Provenance provenance = Provenance::Analytic;
  double bound = 0.0;  // right-hand side
  double margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string status;  // "checked", "no valid upper bound"
  bool flagged = false;  // h came from an estimate
};

// margin = sum lambda_i^+ - h.
MarginReport ruelle_check(const EntropyValue& h, const LyapunovSpectrum& spectrum);

// margin = H^k_upper + sum_{i>k} lambda_i^+ - h. H^0 = 0 is always a valid
// bound, so k = 0 reduces to the Ruelle check.
MarginReport ruelle_newhouse_check(const EntropyValue& h, const std::optional<UpperBound>& h_upper,
                                   const LyapunovSpectrum& spectrum, int k);

nlohmann::json to_json(const LyapunovSpectrum& s);
nlohmann::json to_json(const MarginReport& m);

}  // namespace dimentropy
