#pragma once

// Dimensional entropies h^k and H^k over finite disk families, entropy
// dimensions, and the gap / semicontinuity / sub-disk experiments.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimentropy/covering.hpp"
#include "dimentropy/geometry.hpp"
#include "dimentropy/growth.hpp"
#include "dimentropy/systems.hpp"

namespace dimentropy {

struct EntropySchedule {
  std::vector<double> eps = {0.1, 0.05, 0.02};
  int n_max = 12;
  std::size_t max_cloud = std::size_t{1} << 20;  // samples per disk
  double resolution_c = 2.0;
  int resolution_horizon = 0;  // n in the grid rule; 0 means n_max
  CoveringOptions covering;
  FitOptions fit;
};

struct DiskRate {
  std::string label;
  std::optional<RateEstimate> rate;  // empty when every window saturated
  std::string error;
  std::size_t cloud_size = 0;
  bool resolution_capped = false;
  std::vector<CoveringSeries> greedy;
};

// Rate and covering series of a single disk.
DiskRate disk_entropy(const SmoothMap& f, const SingularDisk& phi, const EntropySchedule& schedule = {});

struct DimensionalEntry {
  int k = 0;
  double h_lower = 0.0;  // max over members of per-disk rates
  double H_lower = 0.0;  // rate of n -> max over members of counts
  std::string family;
  std::vector<DiskRate> disks;
  std::optional<RateEstimate> uniform;
  std::string best_disk;
  bool truncated = false;
  bool non_compact = false;
  bool saturated = false;  // some rate could not be fitted
  std::size_t rejected_by_size = 0;
};

DimensionalEntry dimensional_entropy(const SmoothMap& f, const DiskFamily& family, int k,
                                     const EntropySchedule& schedule = {});

struct DimensionalEntropyProfile {
  std::vector<int> k_values;
  std::vector<double> h_lower;
  std::vector<double> H_lower;
  std::vector<DimensionalEntry> entries;
  std::vector<std::string> flags;  // per k: inherited-from-k-1 markers etc.
  bool lower_bounds = true;
};

// Default families: a point (k = 0), coordinate k-planes and a generic
// affine k-disk through an interior point (0 < k < d), the chart cube (k = d).
DiskFamily default_family(const SmoothMap& f, int k);

// Entries for k = 0..d. Each value is made nondecreasing in k and h <= H by
// taking running maxima: a k-disk family restricts to (k-1)-dimensional faces,
// so the estimate for k is also a lower bound for every larger dimension.
DimensionalEntropyProfile build_profile(const SmoothMap& f, const std::vector<DiskFamily>& families,
                                        const EntropySchedule& schedule = {});
DimensionalEntropyProfile assemble_profile(std::vector<DimensionalEntry> entries);

enum class DimensionVerdict { Resolved, AmbiguousWithinTolerance };

struct EntropyDimensions {
  int d = 0;
  int d_u = 0;
  std::optional<int> d_s;  // empty: inverse profile not computed
  std::string d_s_status;
  double h_top = 0.0;
  double tol_du = 0.0;
  DimensionVerdict verdict = DimensionVerdict::Resolved;
  std::vector<std::string> notes;
};

// d_u = min{k : H[k] >= h - tol}; tol defaults to 0.1 h.
EntropyDimensions entropy_dimensions(const SmoothMap& f, const DimensionalEntropyProfile& profile,
                                     const std::optional<DimensionalEntropyProfile>& inverse_profile, double h_top_estimate,
                                     std::optional<double> tol_du = std::nullopt);

struct GapReport {
  int k = 0;
  int r = 0;
  double h_lower = 0.0;
  double H_lower = 0.0;
  double gap = 0.0;
  double allowance = 0.0;  // (k/r) lip(f)
  double tolerance = 0.0;
  bool within = true;
  bool non_compact = false;
  std::string witness;
  std::string note;
};

GapReport gap_experiment(const SmoothMap& f, const DiskFamily& family, int k, int r,
                         const EntropySchedule& schedule = {}, double tolerance = 0.1);

// Segment families on a 2-torus.
DiskFamily unit_segment_family(const ManifoldModel& m, int directions, const Point& base);
DiskFamily wrapped_segment_family(const ManifoldModel& m, const std::vector<double>& lengths, const Point& direction,
                                  const Point& base);

struct ScanRow {
  double lambda = 0.0;
  std::optional<RateEstimate> rate;  // chart-cube cloud
  double cube_estimate = 0.0;
  std::vector<std::pair<double, double>> fiber_estimates;  // (x1, rate) of {x1} x [0,1]
  double h_estimate = 0.0;  // max of the above: a lower bound of h^d = h_top
  std::string error;
};

struct SemicontinuityReport {
  std::vector<ScanRow> rows;
  std::optional<RateEstimate> fiber_rate;  // k = 1 disk {1} x [0,1] at lambda = 0
  double fiber_estimate = 0.0;
  int dim = 2;
  double sigma = 1.0;
};

struct ScanOptions {
  int dim = 2;
  double sigma = 1.0;
  int cloud_per_axis = 0;  // 0: from max_cloud
  std::vector<double> fibers = {0.0, 0.25, 0.5, 0.75, 1.0};
  EntropySchedule schedule;
  EntropySchedule fiber_schedule;
};

SemicontinuityReport semicontinuity_scan(const std::vector<double>& lambdas, const ScanOptions& options = {});

struct SubdiskReport {
  double h_estimate = 0.0;
  std::optional<RateEstimate> rate;
  double max_gamma = 0.0;
  std::string best_subdisk;
  std::vector<std::pair<std::string, double>> gammas;
  int horizon = 0;
};

// Compares h_top(f, psi) with the largest volume growth over psi and its
// linear subdivisions; only reports, no verdict.
SubdiskReport subdisk_probe(const SmoothMap& f, const SingularDisk& psi, const EntropySchedule& schedule = {},
                            int pieces = 4, int volume_horizon = 12);

nlohmann::json to_json(const RateEstimate& r);
nlohmann::json to_json(const DimensionalEntry& e);
nlohmann::json to_json(const DimensionalEntropyProfile& p);
nlohmann::json to_json(const EntropyDimensions& d);
nlohmann::json to_json(const GapReport& g);
nlohmann::json to_json(const SemicontinuityReport& s);
nlohmann::json to_json(const SubdiskReport& s);

}  // namespace dimentropy
