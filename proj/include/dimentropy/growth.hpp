#pragma once

// k-dimensional volume of singular disks and its growth under iteration.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimentropy/covering.hpp"
#include "dimentropy/geometry.hpp"
#include "dimentropy/systems.hpp"

namespace dimentropy {

struct VolumeOptions {
  int gridres = 0;  // midpoint nodes per axis; 0 picks from k
  int max_gridres = 1 << 16;
  std::size_t node_budget = std::size_t{1} << 22;
  double tolerance = 0.01;  // relative change between refinements
  int reorthogonalize_every = 10;
  int window = 5;
  // Weighted product metric diag(w^2); empty means the flat metric.
  std::vector<double> metric_weights;
};

struct VolumeSeries {
  std::string disk;
  int k = 0;
  std::vector<double> values;  // values[n] = vol(f^n o phi), n = 0..horizon
  std::vector<double> log_values;
  double gamma = 0.0;
  int gamma_start = 0;  // first n of the maximizing window
  int gridres = 0;
  bool converged = true;
  bool degenerate = false;
  double last_change = 0.0;
};

// Composite midpoint quadrature of sqrt(det J^T J).
double disk_volume(const SingularDisk& psi, int gridres = 0, bool* degenerate = nullptr);

VolumeSeries volume_growth(const SmoothMap& f, const SingularDisk& phi, int horizon, const VolumeOptions& options = {});

// Max over windows of `window` consecutive horizons, starting in the later
// half of the admissible range, of the least-squares slope of log values.
double tail_window_gamma(const std::vector<double>& log_values, int window, int* start = nullptr);

struct CurveCheck {
  double eps = 0.0;
  std::vector<int> horizons;
  std::vector<double> lhs;  // eps * r(eps, n)
  std::vector<double> rhs;  // max_{k<n} length(f^k o phi) + 1
  bool holds = true;
  std::optional<int> witness;
  double length0 = 0.0;
};

// eps * r(eps,n,phi) <= max_{0<=k<n} length(f^k o phi) + 1 for a unit-length
// curve, with r estimated from below by the separated count.
CurveCheck length_vs_covering_check(const SmoothMap& f, const SingularDisk& phi, double eps, int horizon,
                                    std::size_t max_cloud = 1 << 20, double tolerance = 1e-9);

struct MetricShift {
  double gamma_flat = 0.0;
  double gamma_weighted = 0.0;
  std::vector<double> weights;
  double shift() const { return gamma_weighted - gamma_flat; }
};

MetricShift metric_invariance(const SmoothMap& f, const SingularDisk& phi, int horizon, const std::vector<double>& weights);

nlohmann::json to_json(const VolumeSeries& v);
nlohmann::json to_json(const CurveCheck& c);

}  // namespace dimentropy
