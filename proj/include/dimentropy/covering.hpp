#pragma once

// (eps,n)-covering and separated numbers of finite point clouds, and growth
// rates fitted from them.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dimentropy/geometry.hpp"
#include "dimentropy/systems.hpp"

namespace dimentropy {

enum class CoverMethod { GreedyCover, MaximalSeparated };
std::string to_string(CoverMethod m);

struct Cloud {
  ManifoldModel manifold;
  std::vector<Point> points;
  std::string description;
};

// Closed parameter grid pushed through phi.
Cloud disk_cloud(const SingularDisk& phi, int per_axis);
// Midpoint grid over the fundamental domain.
Cloud manifold_cloud(const ManifoldModel& m, int per_axis);

// Grid resolution per axis for a disk cloud that keeps neighbouring samples
// within eps/C of each other up to time n: ceil(C * max(1, |Dphi| Lip^(n-1)) / eps),
// capped at `cap`. The bool reports whether the cap was hit.
std::pair<int, bool> cloud_gridres(const SingularDisk& phi, const SmoothMap& f, double eps, int n, double c = 2.0,
                                   int cap = 1 << 20);

// max over 0 <= k < n of distance(f^k x, f^k y).
double dynamic_distance(const SmoothMap& f, const Point& x, const Point& y, int n);

// Float orbits, point-major: data[(i * horizon + k) * dim + axis].
struct OrbitTable {
  int dim = 0;
  int horizon = 0;
  std::size_t size = 0;
  std::vector<Axis> axes;
  std::vector<float> data;

  static OrbitTable shaped(const ManifoldModel& m, std::size_t points, int horizon);
  float* at(std::size_t i, int k) {
    return data.data() + (i * static_cast<std::size_t>(horizon) + static_cast<std::size_t>(k)) * static_cast<std::size_t>(dim);
  }
  const float* at(std::size_t i, int k) const {
    return data.data() + (i * static_cast<std::size_t>(horizon) + static_cast<std::size_t>(k)) * static_cast<std::size_t>(dim);
  }
};

// Orbits of times 0..horizon-1 for every cloud point.
OrbitTable compute_orbits(const SmoothMap& f, const Cloud& cloud, int horizon, int workers = 0);

// Greedy maximal set with pairwise d_n >= rho, visiting seeds1, seeds2, then
// all points in index order.
std::vector<std::uint32_t> greedy_centers(const OrbitTable& orbits, double rho, int n,
                                          const std::vector<std::uint32_t>& seeds1 = {},
                                          const std::vector<std::uint32_t>& seeds2 = {});

struct CoveringEstimate {
  double eps = 0.0;
  int n = 0;
  std::size_t count = 0;
  CoverMethod method = CoverMethod::GreedyCover;
  std::string sample;
  std::size_t cloud_size = 0;
};

// GreedyCover: greedy maximal set with pairwise d_n >= eps, i.e. every cloud
// point lies within d_n < eps of a pick. MaximalSeparated: the same greedy at
// radius 2 eps, a packing by disjoint eps-balls. Sep(eps) <= Cover(eps) <= Sep(eps/2).
CoveringEstimate covering_number(const SmoothMap& f, const Cloud& cloud, double eps, int n,
                                 CoverMethod method = CoverMethod::GreedyCover);

struct CoveringOptions {
  double saturation = 0.5;       // horizons with count >= saturation * cloud are saturated
  std::size_t budget_bytes = std::size_t{1} << 30;  // orbit storage cap
  int workers = 0;
  bool separated = true;  // also compute the 2 eps packing series
};

struct CoveringSeries {
  double eps = 0.0;
  CoverMethod method = CoverMethod::GreedyCover;
  std::vector<int> horizons;
  std::vector<std::size_t> counts;
  std::size_t cloud_size = 0;
  std::optional<int> saturated_at;  // first horizon reaching the guard; its count stops at the guard
  std::string sample;
};

struct CoveringTable {
  std::vector<CoveringSeries> greedy;     // one per eps, same order as requested
  std::vector<CoveringSeries> separated;  // MaximalSeparated at the same eps
  int n_max = 0;                          // horizon actually reached
  bool budget_capped = false;
  std::size_t cloud_size = 0;
};

// Counts for n = 1..n_max and every eps. Counts are nested: centers found at
// (eps, n-1) and at the next larger eps seed the greedy at (eps, n), so every
// series is nondecreasing in n and across decreasing eps.
CoveringTable covering_table(const SmoothMap& f, const Cloud& cloud, std::vector<double> eps_schedule, int n_max,
                             const CoveringOptions& options = {});
// Same on precomputed orbits (n_max = orbits.horizon).
CoveringTable covering_table(const OrbitTable& orbits, std::vector<double> eps_schedule, const CoveringOptions& options,
                             const std::string& sample);

struct FitOptions {
  double saturation = 0.5;
  int n_min = 1;
  int tail = 0;  // use only the last `tail` unsaturated horizons; 0 = all
  int min_points = 3;
};

struct PerEpsSlope {
  double eps = 0.0;
  std::optional<double> slope;
  int n_lo = 0, n_hi = 0;
  double residual = 0.0;
  std::optional<int> saturated_at;
};

struct RateEstimate {
  std::vector<std::pair<int, double>> pairs;  // (n, log count) at the reported eps
  double slope = 0.0;
  int n_lo = 0, n_hi = 0;
  double eps = 0.0;  // eps the slope was taken at
  std::vector<double> eps_schedule;
  std::vector<PerEpsSlope> per_eps;
  double residual = 0.0;  // RMS residual of the reported fit
  bool monotone_in_eps = true;  // counts nonincreasing in eps at every shared horizon
};

double least_squares_slope(const std::vector<std::pair<int, double>>& pts, double* rms_residual = nullptr);

// Slope at the smallest eps with an unsaturated window of >= min_points horizons.
RateEstimate fit_rate(const std::vector<CoveringSeries>& series, const FitOptions& options = {});

// max over n, m with n + m <= n_max of log c(n+m) - log c(n) - log c(m), clipped at 0.
double subadditivity_slack(const CoveringSeries& series);

void write_csv(std::ostream& os, const CoveringTable& table);

}  // namespace dimentropy
