#pragma once

// Skew product over the x4 circle map whose fiber orbit of one curve is
// driven by a fixed base-4 digit word: digit 0 applies f, digit 2 applies g.
// Covering numbers of the curve grow like 2^t/2 while its length decays.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dimentropy {

// Quintic Hermite segment on [x0, x1] matching value, slope and curvature at both ends.
class QuinticJoin {
 public:
  QuinticJoin() = default;
  QuinticJoin(double x0, double x1, double y0, double v0, double a0, double y1, double v1, double a1);
  double value(double x) const;
  double slope(double x) const;
  double curvature(double x) const;

 private:
  double x0_ = 0.0, h_ = 1.0, y1_ = 0.0;
  double c_[6] = {0, 0, 0, 0, 0, 0};
};

// Fiber maps on I = [0,1].
class FiberMaps {
 public:
  explicit FiberMaps(double alpha);

  double alpha() const { return alpha_; }
  double f(double x) const;
  double df(double x) const;
  double g(double x) const;
  double dg(double x) const;
  // Inverses: the left branch of f on [0, 1/2] and g on its image [0, 1/2].
  double f_left_inverse(double y) const;
  double g_inverse(double y) const;

 private:
  double alpha_;
  double slope_;  // 2 (1 + alpha)
  QuinticJoin f_cap_, g_join_;
};

struct FiberCheck {
  std::string clause;
  bool holds = true;
  double error = 0.0;
};

// x_{-n} for n = 0..count-1: 1, 1/2, then 2^-n (1+alpha)^(1-n).
std::vector<double> preimage_table(double alpha, int count);

// Builds f and g and re-verifies every required property on a grid; throws
// Error naming the first violated clause. alpha = 0 gives the tent-map control
// (no collars), accepted without the smoothness clauses.
FiberMaps build_fiber_maps(double alpha, std::vector<FiberCheck>* checks = nullptr);

struct SkewConfig {
  double alpha = 0.2;
  std::vector<int> n_schedule = {1, 2, 6, 24};  // n_i = i!
  int levels = 3;                               // scheduled times t_1..t_levels
  double eps = 0.3;
  int points_per_lap = 64;
  int max_points_per_lap = 512;
  std::size_t max_cloud = std::size_t{1} << 18;
  int growth_window = 3;  // shortened f-blocks used to measure the per-step rate

  int n(int i) const;       // 1-based
  int N(int i) const;       // 3 (n_1 + ... + n_i)
  int t(int i) const;       // N_i + 2 n_{i+1}
  int word_length() const;  // t_levels
};

// 0^{n1} 2^{n1} 0^{n1+n2} 2^{n2} ... truncated to `length` digits.
std::vector<std::uint8_t> digit_word(const SkewConfig& config, int length);

// Fiber orbit of x under the digit-driven composition, length+1 points.
std::vector<double> fiber_orbit(const FiberMaps& maps, const std::vector<std::uint8_t>& digits, double x, int length);

// The same orbit driven by iterating theta -> 4 theta mod 1 in floating point
// and reading the sector: [0,1/6] applies f, [1/2,2/3] applies g. Only
// meaningful for short times before the base orbit loses its digits.
std::vector<double> fiber_orbit_by_base(const FiberMaps& maps, const std::vector<std::uint8_t>& digits, double x,
                                        int length);

// Laps of the composed fiber map: monotone pieces of the curve, grouped by image interval.
struct LapMultiset {
  struct Entry {
    double lo = 0.0, hi = 1.0;
    double multiplicity = 1.0;  // powers of two, exact in double
  };
  std::vector<Entry> entries = {{0.0, 1.0, 1.0}};

  void apply(const FiberMaps& maps, std::uint8_t digit);
  double laps() const;
  double volume() const;
  double log_laps() const;
  double log_volume() const;
};

// Laps after each of the first `length` digits (index m = time m).
std::vector<LapMultiset> lap_history(const FiberMaps& maps, const std::vector<std::uint8_t>& digits, int length);

// Counts the monotone runs of the composed map on a uniform grid of the fiber:
// an independent branch count for comparison with the lap multiset.
std::uint64_t grid_branch_count(const FiberMaps& maps, const std::vector<std::uint8_t>& digits, int length,
                                std::size_t grid);

struct SkewPoint {
  int i = 0;
  int t = 0;
  int N = 0;
  int n_next = 0;
  double log_r = 0.0;            // measured, extended by the measured per-step rate if shortened
  double log_r_lap_limit = 0.0;  // extended by log 2 per removed step instead
  double log_vol = 0.0;        // quadrature over the cloud, renormalized if needed
  double log_vol_exact = 0.0;  // lap multiset on the full word
  double predicted_log_r = 0.0;
  double predicted_log_vol = 0.0;          // with the exact x_{-n} table
  double predicted_log_vol_display = 0.0;  // dropping the +1 exponent
  double laps_at_N = 0.0;
  double predicted_laps_at_N = 0.0;
  std::size_t cover_count = 0;
  std::size_t cloud_size = 0;
  int points_per_lap = 0;
  int shortened_by = 0;  // f-steps removed from the last f-block
  double step_rate = 0.0;        // per-step log growth of the count in the last f-block; 0 if not shortened
  double renormalization = 0.0;  // shortened_by * step_rate, added to log_r
  std::vector<std::pair<int, std::size_t>> growth_counts;  // (f-steps kept, count)
  double max_neighbour_gap = 0.0;
  bool resolved = true;
  std::string note;
};

struct SkewSeries {
  SkewConfig config;
  std::vector<SkewPoint> points;
  bool truncated = false;
  std::string flag;
};

// Covering and volume at t_1..t_levels of the fiber curve phi(s) = (theta_1, (s+1)/2).
SkewSeries run_schedule(const SkewConfig& config);

struct SeparationReport {
  struct Row {
    int i = 0;
    int t = 0;
    bool checked = true;  // false below the first checked level
    double r_rel_error = 0.0;
    double vol_rel_error = 0.0;
    bool r_ok = true;
    bool vol_ok = true;
    double covering_rate = 0.0;
    double volume_rate = 0.0;
  };
  std::vector<Row> rows;
  double last_gap = 0.0;  // covering rate - volume rate at the last resolved t_i
  bool separated = false;
  bool within_tolerance = true;
  double tolerance = 0.1;
  int from_level = 2;
};

// Relative agreement with the closed forms is checked from `from_level` on:
// at t_1 the O(log 1/eps) term of the count is comparable to the main term.
SeparationReport verify_separation(const SkewSeries& series, double tolerance = 0.1, int from_level = 2);

nlohmann::json to_json(const SkewConfig& c);
nlohmann::json to_json(const SkewSeries& s);
nlohmann::json to_json(const SeparationReport& r);

}  // namespace dimentropy
