#include "dimentropy/skewlab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dimentropy/covering.hpp"
#include "dimentropy/systems.hpp"

namespace dimentropy {

namespace {

constexpr double kHalf = 0.5;
constexpr double kJoinTol = 1e-9;

template <class F>
double bisect_increasing(F&& fn, double lo, double hi, double y) {
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fn(mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

QuinticJoin::QuinticJoin(double x0, double x1, double y0, double v0, double a0, double y1, double v1, double a1)
    : x0_(x0), h_(x1 - x0) {
  const double h = h_;
  c_[0] = y0;
  c_[1] = h * v0;
  c_[2] = 0.5 * h * h * a0;
  const double A = y1 - c_[0] - c_[1] - c_[2];
  const double B = h * v1 - c_[1] - 2.0 * c_[2];
  const double C = h * h * a1 - 2.0 * c_[2];
  c_[3] = 10.0 * A - 4.0 * B + 0.5 * C;
  c_[4] = -15.0 * A + 7.0 * B - C;
  c_[5] = 6.0 * A - 3.0 * B + 0.5 * C;
  y1_ = y1;
}

double QuinticJoin::value(double x) const {
  const double u = (x - x0_) / h_;
  if (u >= 1.0) return y1_;
  return c_[0] + u * (c_[1] + u * (c_[2] + u * (c_[3] + u * (c_[4] + u * c_[5]))));
}

double QuinticJoin::slope(double x) const {
  const double u = (x - x0_) / h_;
  return (c_[1] + u * (2 * c_[2] + u * (3 * c_[3] + u * (4 * c_[4] + u * 5 * c_[5])))) / h_;
}

double QuinticJoin::curvature(double x) const {
  const double u = (x - x0_) / h_;
  return (2 * c_[2] + u * (6 * c_[3] + u * (12 * c_[4] + u * 20 * c_[5]))) / (h_ * h_);
}

FiberMaps::FiberMaps(double alpha) : alpha_(alpha), slope_(2.0 * (1.0 + alpha)) {
  const double a = kHalf - alpha;
  if (alpha > 0.0) f_cap_ = QuinticJoin(a, kHalf, slope_ * a, slope_, 0.0, 1.0, 0.0, -(5.0 / 3.0) * slope_ / alpha);
  g_join_ = QuinticJoin(kHalf, 1.0, kHalf / slope_, 1.0 / slope_, 0.0, kHalf, 0.6, 0.0);
}

double FiberMaps::f(double x) const {
  if (x > kHalf) x = 1.0 - x;
  if (x <= kHalf - alpha_) return slope_ * x;
  return f_cap_.value(x);
}

double FiberMaps::df(double x) const {
  const double sign = x > kHalf ? -1.0 : 1.0;
  if (x > kHalf) x = 1.0 - x;
  if (x <= kHalf - alpha_) return sign * slope_;
  return sign * f_cap_.slope(x);
}

double FiberMaps::g(double x) const { return x <= kHalf ? x / slope_ : g_join_.value(x); }

double FiberMaps::dg(double x) const { return x <= kHalf ? 1.0 / slope_ : g_join_.slope(x); }

double FiberMaps::f_left_inverse(double y) const {
  const double a = kHalf - alpha_;
  if (y <= slope_ * a) return y / slope_;
  if (y >= 1.0) return kHalf;
  return bisect_increasing([this](double x) { return f_cap_.value(x); }, a, kHalf, y);
}

double FiberMaps::g_inverse(double y) const {
  const double knee = kHalf / slope_;
  if (y <= knee) return y * slope_;
  if (y >= kHalf) return 1.0;
  return bisect_increasing([this](double x) { return g_join_.value(x); }, kHalf, 1.0, y);
}

std::vector<double> preimage_table(double alpha, int count) {
  std::vector<double> x;
  for (int n = 0; n < count; ++n) {
    if (n == 0)
      x.push_back(1.0);
    else if (n == 1)
      x.push_back(0.5);
    else
      x.push_back(std::pow(2.0, -n) * std::pow(1.0 + alpha, 1 - n));
  }
  return x;
}

FiberMaps build_fiber_maps(double alpha, std::vector<FiberCheck>* checks) {
  if (!(alpha >= 0.0 && alpha <= 0.25)) throw Error("build_fiber_maps: alpha must lie in [0, 0.25]");
  FiberMaps maps(alpha);
  std::vector<FiberCheck> out;
  auto record = [&](const std::string& clause, double error, double tol) {
    out.push_back({clause, error <= tol, error});
  };
  const int grid = 20000;
  const double m = 2.0 * (1.0 + alpha);

  record("f(0) = 0", std::abs(maps.f(0.0)), 1e-14);
  record("f(1) = 0", std::abs(maps.f(1.0)), 1e-14);
  record("f(1/2) = 1", std::abs(maps.f(0.5) - 1.0), 1e-14);
  double inc = 0.0, dec = 0.0, lin = 0.0, range = 0.0;
  for (int i = 1; i < grid; ++i) {
    const double x = 0.5 * i / grid;
    inc = std::max(inc, -std::min(maps.df(x), maps.f(x) - maps.f(x - 0.5 / grid)));
    const double xr = 1.0 - x;
    dec = std::max(dec, std::max(maps.df(xr), maps.f(xr) - maps.f(xr - 0.5 / grid)));
    if (x <= 0.5 - alpha) lin = std::max({lin, std::abs(maps.df(x) - m), std::abs(maps.df(xr) + m)});
    range = std::max({range, -maps.f(x), maps.f(x) - 1.0});
  }
  record("f increasing on [0,1/2]", inc, 0.0);
  record("f decreasing on [1/2,1]", dec, 0.0);
  record("f' = +-2(1+alpha) outside the collars", lin, 1e-12);
  record("f maps I into I", range, 1e-14);

  const std::vector<double> xs = preimage_table(alpha, 40);
  if (alpha > 0.0) {
    record("1/2 has a preimage in [0, 1/2 - alpha]", std::max(0.0, xs[2] - (0.5 - alpha)), 0.0);
    const QuinticJoin cap(0.5 - alpha, 0.5, m * (0.5 - alpha), m, 0.0, 1.0, 0.0, -(5.0 / 3.0) * m / alpha);
    const double a = 0.5 - alpha;
    record("f is C^2 at the collar edge", std::abs(cap.curvature(a)) + std::abs(cap.slope(a) - m), 1e-9);
    record("f is C^2 at 1/2", std::abs(cap.slope(0.5)), 1e-9);
  }
  double pre = 0.0;
  for (std::size_t n = 1; n + 1 < xs.size(); ++n) pre = std::max(pre, std::abs(maps.f(xs[n + 1]) - xs[n]) / xs[n]);
  record("f(x_{-n-1}) = x_{-n}", pre, 1e-10);

  record("g(0) = 0", std::abs(maps.g(0.0)), 1e-14);
  double gslope = 0.0, gmono = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double s = maps.dg(x);
    gslope = std::max({gslope, -s, s - 1.0 + 1e-12});
    if (i > 0) gmono = std::max(gmono, maps.g(x - 1.0 / grid) - maps.g(x));
  }
  record("0 < g' < 1", gslope, 0.0);
  record("g increasing", gmono, 0.0);
  double gpre = 0.0;
  for (std::size_t n = 0; n + 1 < xs.size(); ++n) gpre = std::max(gpre, std::abs(maps.g(xs[n]) - xs[n + 1]) / xs[n + 1]);
  record("g(x_{-n}) = x_{-n-1}", gpre, 1e-10);
  const double knee = 0.5 / m;
  record("g is C^2 at 1/2", std::abs(maps.g(0.5) - knee) + std::abs(maps.dg(0.5) - 1.0 / m), 1e-12);

  if (checks) *checks = out;
  for (const FiberCheck& c : out)
    if (!c.holds) throw Error("fiber map construction rejected: " + c.clause + " (error " + std::to_string(c.error) + ")");
  return maps;
}

int SkewConfig::n(int i) const {
  if (i < 1 || i > static_cast<int>(n_schedule.size())) throw Error("SkewConfig: n_i outside the schedule");
  return n_schedule[static_cast<std::size_t>(i - 1)];
}

int SkewConfig::N(int i) const {
  int s = 0;
  for (int j = 1; j <= i; ++j) s += n(j);
  return 3 * s;
}

int SkewConfig::t(int i) const { return N(i) + 2 * n(i + 1); }

int SkewConfig::word_length() const { return t(levels); }

std::vector<std::uint8_t> digit_word(const SkewConfig& config, int length) {
  std::vector<std::uint8_t> w;
  const int blocks = static_cast<int>(config.n_schedule.size());
  for (int i = 1; i <= blocks && static_cast<int>(w.size()) < length; ++i) {
    const int zeros = i == 1 ? config.n(1) : config.n(i - 1) + config.n(i);
    w.insert(w.end(), static_cast<std::size_t>(zeros), 0);
    w.insert(w.end(), static_cast<std::size_t>(config.n(i)), 2);
  }
  if (static_cast<int>(w.size()) < length) throw Error("digit_word: schedule too short for the requested length");
  w.resize(static_cast<std::size_t>(length));
  return w;
}

namespace {

double step(const FiberMaps& maps, std::uint8_t digit, double x) { return digit == 0 ? maps.f(x) : maps.g(x); }

}  // namespace

std::vector<double> fiber_orbit(const FiberMaps& maps, const std::vector<std::uint8_t>& digits, double x, int length) {
  if (length > static_cast<int>(digits.size())) throw Error("fiber_orbit: word shorter than the horizon");
  std::vector<double> orbit{x};
  for (int m = 0; m < length; ++m) orbit.push_back(x = step(maps, digits[static_cast<std::size_t>(m)], x));
  return orbit;
}

std::vector<double> fiber_orbit_by_base(const FiberMaps& maps, const std::vector<std::uint8_t>& digits, double x,
                                        int length) {
  if (length > static_cast<int>(digits.size())) throw Error("fiber_orbit_by_base: word shorter than the horizon");
  double theta = 0.0, scale = 0.25;
  for (std::size_t k = 0; k < digits.size() && k < 26; ++k, scale *= 0.25) theta += digits[k] * scale;
  std::vector<double> orbit{x};
  for (int m = 0; m < length; ++m) {
    std::uint8_t d;
    if (theta <= 1.0 / 6.0 + 1e-9)
      d = 0;
    else if (theta >= 0.5 - 1e-9 && theta <= 2.0 / 3.0 + 1e-9)
      d = 2;
    else
      throw Error("fiber_orbit_by_base: base orbit left both sectors at time " + std::to_string(m));
    orbit.push_back(x = step(maps, d, x));
    theta = std::fmod(4.0 * theta, 1.0);
  }
  return orbit;
}

void LapMultiset::apply(const FiberMaps& maps, std::uint8_t digit) {
  std::vector<Entry> next;
  for (const Entry& e : entries) {
    if (digit != 0) {
      next.push_back({maps.g(e.lo), maps.g(e.hi), e.multiplicity});
    } else if (e.lo < kHalf - kJoinTol && e.hi > kHalf + kJoinTol) {
      next.push_back({std::min(maps.f(e.lo), 1.0), 1.0, e.multiplicity});
      next.push_back({std::min(maps.f(e.hi), 1.0), 1.0, e.multiplicity});
    } else {
      const double a = maps.f(e.lo), b = maps.f(e.hi);
      next.push_back({std::min(a, b), std::max(a, b), e.multiplicity});
    }
  }
  std::sort(next.begin(), next.end(), [](const Entry& a, const Entry& b) { return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi; });
  entries.clear();
  for (const Entry& e : next) {
    if (!entries.empty() && std::abs(entries.back().lo - e.lo) <= 1e-12 && std::abs(entries.back().hi - e.hi) <= 1e-12)
      entries.back().multiplicity += e.multiplicity;
    else
      entries.push_back(e);
  }
}

double LapMultiset::laps() const {
  double s = 0.0;
  for (const Entry& e : entries) s += e.multiplicity;
  return s;
}

double LapMultiset::volume() const {
  double s = 0.0;
  for (const Entry& e : entries) s += e.multiplicity * (e.hi - e.lo);
  return s;
}

double LapMultiset::log_laps() const { return std::log(laps()); }
double LapMultiset::log_volume() const { return std::log(volume()); }

std::vector<LapMultiset> lap_history(const FiberMaps& maps, const std::vector<std::uint8_t>& digits, int length) {
  if (length > static_cast<int>(digits.size())) throw Error("lap_history: word shorter than the horizon");
  std::vector<LapMultiset> h(1);
  for (int m = 0; m < length; ++m) {
    LapMultiset next = h.back();
    next.apply(maps, digits[static_cast<std::size_t>(m)]);
    h.push_back(std::move(next));
  }
  return h;
}

std::uint64_t grid_branch_count(const FiberMaps& maps, const std::vector<std::uint8_t>& digits, int length,
                                std::size_t grid) {
  if (grid < 2) throw Error("grid_branch_count: grid needs at least two points");
  auto at = [&](std::size_t j) {
    double x = static_cast<double>(j) / static_cast<double>(grid - 1);
    for (int m = 0; m < length; ++m) x = step(maps, digits[static_cast<std::size_t>(m)], x);
    return x;
  };
  // A reversal counts only once the value has moved `tol` away from the last
  // extremum, so rounding noise on flat tops is not read as a fold.
  const double tol = 1e-12;
  std::uint64_t runs = 1;
  int dir = 0;
  double extreme = at(0);
  for (std::size_t j = 1; j < grid; ++j) {
    const double cur = at(j);
    if (dir >= 0 && cur > extreme) {
      extreme = cur;
      if (dir == 0 && cur - at(0) > tol) dir = 1;
    } else if (dir <= 0 && cur < extreme) {
      extreme = cur;
      if (dir == 0 && at(0) - cur > tol) dir = -1;
    } else if (dir != 0 && std::abs(cur - extreme) > tol) {
      ++runs;
      dir = -dir;
      extreme = cur;
    }
  }
  return runs;
}

namespace {

struct PulledCloud {
  std::vector<std::vector<double>> orbits;  // sorted by the initial fiber coordinate, times 0..length
  double max_gap = 0.0;
};

// Samples every lap of the composition at time `top` at the same image
// points, pulls them back along all inverse branches, and continues forward
// with the remaining digits. Only valid when every lap at `top` covers the
// same image interval, which holds right after an f-block for this word.
PulledCloud pulled_cloud(const FiberMaps& maps, const std::vector<std::uint8_t>& word, int top, int per_lap,
                         double image_hi) {
  const int length = static_cast<int>(word.size());
  std::vector<double> b(static_cast<std::size_t>(top) + 1, 1.0);  // image of time m is [0, b[m]]
  for (int m = 1; m <= top; ++m) {
    const double prev = b[static_cast<std::size_t>(m - 1)];
    const std::uint8_t d = word[static_cast<std::size_t>(m - 1)];
    b[static_cast<std::size_t>(m)] = d == 0 ? (prev > kHalf + kJoinTol ? 1.0 : maps.f(prev)) : maps.g(prev);
  }
  PulledCloud out;
  for (int j = 0; j < per_lap; ++j) {
    const double u = 0.5 * (1.0 - std::cos(std::acos(-1.0) * (j + 0.5) / per_lap));
    // Depth-first over inverse branches from time `top` down to 0.
    std::vector<std::pair<int, double>> stack{{top, u * image_hi}};
    while (!stack.empty()) {
      auto [m, y] = stack.back();
      stack.pop_back();
      if (m == 0) {
        // Forward from the pulled-back start, so the cloud follows the
        // actual composition; the pullback only places the samples.
        out.orbits.push_back(fiber_orbit(maps, word, y, length));
        continue;
      }
      const double lim = b[static_cast<std::size_t>(m - 1)] + 1e-15;
      if (word[static_cast<std::size_t>(m - 1)] == 0) {
        const double xl = maps.f_left_inverse(y), xr = 1.0 - xl;
        if (xr <= lim && xr > xl) stack.push_back({m - 1, xr});
        if (xl <= lim) stack.push_back({m - 1, xl});
      } else {
        stack.push_back({m - 1, maps.g_inverse(y)});
      }
    }
  }
  std::sort(out.orbits.begin(), out.orbits.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
  for (std::size_t i = 1; i < out.orbits.size(); ++i) {
    double d = 0.0;
    for (int k = 0; k < length; ++k)
      d = std::max(d, std::abs(out.orbits[i][static_cast<std::size_t>(k)] - out.orbits[i - 1][static_cast<std::size_t>(k)]));
    out.max_gap = std::max(out.max_gap, d);
  }
  return out;
}

double quadrature_length(const FiberMaps& maps, const std::vector<std::uint8_t>& word, const PulledCloud& cloud) {
  const std::size_t last = word.size();
  std::vector<double> ends;
  ends.push_back(fiber_orbit(maps, word, 0.0, static_cast<int>(last)).back());
  for (const auto& o : cloud.orbits) ends.push_back(o[last]);
  ends.push_back(fiber_orbit(maps, word, 1.0, static_cast<int>(last)).back());
  double len = 0.0;
  for (std::size_t i = 1; i < ends.size(); ++i) len += std::abs(ends[i] - ends[i - 1]);
  return len;
}

struct Measured {
  std::size_t count = 0;
  std::size_t cloud_size = 0;
  int per_lap = 0;
  double gap = 0.0;
  double length = 0.0;
};

// The word up to N, then q f-steps and the full g-block of length n.
Measured measure(const FiberMaps& maps, const std::vector<std::uint8_t>& word, int N, int q, int n,
                 const SkewConfig& config, double laps_N) {
  std::vector<std::uint8_t> reduced(word.begin(), word.begin() + N);
  reduced.insert(reduced.end(), static_cast<std::size_t>(q), 0);
  reduced.insert(reduced.end(), static_cast<std::size_t>(n), 2);
  const double laps_top = laps_N * std::pow(2.0, q);
  int per_lap = config.points_per_lap;
  PulledCloud cloud;
  while (true) {
    cloud = pulled_cloud(maps, reduced, N + q, per_lap, 1.0);
    if (cloud.max_gap <= 0.5 * config.eps || 2 * per_lap > config.max_points_per_lap ||
        laps_top * 2 * per_lap > static_cast<double>(config.max_cloud))
      break;
    per_lap *= 2;
  }
  const int horizon = static_cast<int>(reduced.size());
  OrbitTable table;
  table.dim = 1;
  table.horizon = horizon;
  table.size = cloud.orbits.size();
  table.axes = {Axis{AxisKind::Interval, 0.0, 1.0}};
  table.data.resize(table.size * static_cast<std::size_t>(horizon));
  for (std::size_t j = 0; j < table.size; ++j)
    for (int k = 0; k < horizon; ++k) *table.at(j, k) = static_cast<float>(cloud.orbits[j][static_cast<std::size_t>(k)]);
  Measured m;
  // All samples share the base point theta_1, so the base coordinate
  // contributes nothing to the dynamic distance.
  m.count = greedy_centers(table, config.eps, horizon).size();
  m.cloud_size = table.size;
  m.per_lap = per_lap;
  m.gap = cloud.max_gap;
  m.length = quadrature_length(maps, reduced, cloud);
  return m;
}

}  // namespace

SkewSeries run_schedule(const SkewConfig& config) {
  if (config.levels < 1) throw Error("run_schedule: need at least one scheduled time");
  if (static_cast<int>(config.n_schedule.size()) < config.levels + 1)
    throw Error("run_schedule: n_schedule needs levels + 1 entries");
  if (!(config.eps > 0.0 && config.eps < 1.0)) throw Error("run_schedule: eps must lie in (0, 1)");
  const FiberMaps maps = build_fiber_maps(config.alpha);
  const std::vector<std::uint8_t> word = digit_word(config, config.word_length());
  const std::vector<LapMultiset> laps = lap_history(maps, word, config.word_length());
  const double log2 = std::log(2.0), log1a = std::log1p(config.alpha);

  SkewSeries series;
  series.config = config;
  for (int i = 1; i <= config.levels; ++i) {
    SkewPoint p;
    p.i = i;
    p.N = config.N(i);
    p.n_next = config.n(i + 1);
    p.t = config.t(i);
    p.laps_at_N = laps[static_cast<std::size_t>(p.N)].laps();
    p.predicted_laps_at_N = std::pow(2.0, p.N / 3);
    p.log_vol_exact = laps[static_cast<std::size_t>(p.t)].log_volume();
    p.predicted_log_r = (p.N / 3 + p.n_next) * log2;
    p.predicted_log_vol = (p.N / 3) * log2 - (p.n_next - 1) * log1a;
    p.predicted_log_vol_display = (p.N / 3) * log2 - p.n_next * log1a;

    // Shorten the last f-block until the cloud fits. Each removed f-step
    // doubles the laps and the length exactly; the covering count grows by the
    // per-step rate of f at this eps, measured on the last few resolvable
    // blocks (below log 2 at fixed eps, approaching it as eps -> 0).
    const double laps_N = p.laps_at_N;
    auto fits = [&](int q, int per_lap) {
      return laps_N * std::pow(2.0, q) * per_lap <= static_cast<double>(config.max_cloud);
    };
    int q = p.n_next;
    while (q > 0 && !fits(q, config.points_per_lap)) --q;
    if (!fits(q, config.points_per_lap)) {
      p.resolved = false;
      p.note = "cloud budget below one sample set per lap";
      series.truncated = true;
      series.flag = "schedule truncated at t_" + std::to_string(i);
      series.points.push_back(p);
      break;
    }
    const int lo_q = q == p.n_next ? q : std::max(0, q - config.growth_window);
    for (int qq = lo_q; qq <= q; ++qq) {
      const Measured m = measure(maps, word, p.N, qq, p.n_next, config, laps_N);
      p.growth_counts.emplace_back(qq, m.count);
      if (qq < q) continue;
      p.points_per_lap = m.per_lap;
      p.max_neighbour_gap = m.gap;
      p.resolved = m.gap <= 0.5 * config.eps;
      p.cover_count = m.count;
      p.cloud_size = m.cloud_size;
      p.log_vol = std::log(m.length);
    }
    if (!p.resolved) p.note = "neighbouring samples more than eps/2 apart; branches not resolved";
    p.shortened_by = p.n_next - q;
    if (p.shortened_by > 0) {
      std::vector<std::pair<int, double>> pts;
      for (auto [qq, c] : p.growth_counts) pts.emplace_back(qq, std::log(static_cast<double>(c)));
      p.step_rate = pts.size() >= 2 ? least_squares_slope(pts) : log2;
      if (pts.size() < 2) p.note += "per-step rate not measurable, log 2 assumed;";
    }
    p.renormalization = p.shortened_by * p.step_rate;
    const double base = std::log(static_cast<double>(p.cover_count));
    p.log_r = base + p.renormalization;
    p.log_r_lap_limit = base + p.shortened_by * log2;
    p.log_vol += p.shortened_by * log2;
    if (!p.resolved) {
      series.truncated = true;
      series.flag = "branch resolution failed at t_" + std::to_string(i);
      series.points.push_back(p);
      break;
    }
    series.points.push_back(p);
  }
  return series;
}

SeparationReport verify_separation(const SkewSeries& series, double tolerance, int from_level) {
  SeparationReport r;
  r.tolerance = tolerance;
  r.from_level = from_level;
  const SkewPoint* last = nullptr;
  for (const SkewPoint& p : series.points) {
    if (!p.resolved) continue;
    SeparationReport::Row row;
    row.i = p.i;
    row.t = p.t;
    row.checked = p.i >= from_level;
    row.r_rel_error = std::abs(p.log_r - p.predicted_log_r) / std::abs(p.predicted_log_r);
    row.vol_rel_error = std::abs(p.log_vol - p.predicted_log_vol) / std::abs(p.predicted_log_vol);
    row.r_ok = row.r_rel_error <= tolerance;
    row.vol_ok = row.vol_rel_error <= tolerance;
    row.covering_rate = p.log_r / p.t;
    row.volume_rate = p.log_vol / p.t;
    if (row.checked) r.within_tolerance = r.within_tolerance && row.r_ok && row.vol_ok;
    r.rows.push_back(row);
    last = &p;
  }
  if (last) {
    r.last_gap = r.rows.back().covering_rate - r.rows.back().volume_rate;
    r.separated = r.last_gap > 0.0;
  }
  return r;
}

nlohmann::json to_json(const SkewConfig& c) {
  return {{"alpha", c.alpha},
          {"n_schedule", c.n_schedule},
          {"levels", c.levels},
          {"eps", c.eps},
          {"points_per_lap", c.points_per_lap},
          {"max_points_per_lap", c.max_points_per_lap},
          {"max_cloud", c.max_cloud},
          {"growth_window", c.growth_window}};
}

nlohmann::json to_json(const SkewSeries& s) {
  nlohmann::json pts = nlohmann::json::array();
  for (const SkewPoint& p : s.points)
    pts.push_back({{"i", p.i},
                   {"t", p.t},
                   {"N", p.N},
                   {"n_next", p.n_next},
                   {"log_r", p.log_r},
                   {"log_r_lap_limit", p.log_r_lap_limit},
                   {"step_rate", p.step_rate},
                   {"growth_counts", p.growth_counts},
                   {"log_vol", p.log_vol},
                   {"log_vol_exact", p.log_vol_exact},
                   {"predicted_log_r", p.predicted_log_r},
                   {"predicted_log_vol", p.predicted_log_vol},
                   {"predicted_log_vol_display", p.predicted_log_vol_display},
                   {"laps_at_N", p.laps_at_N},
                   {"predicted_laps_at_N", p.predicted_laps_at_N},
                   {"cover_count", p.cover_count},
                   {"cloud_size", p.cloud_size},
                   {"points_per_lap", p.points_per_lap},
                   {"shortened_by", p.shortened_by},
                   {"renormalization", p.renormalization},
                   {"max_neighbour_gap", p.max_neighbour_gap},
                   {"resolved", p.resolved},
                   {"note", p.note}});
  return {{"config", to_json(s.config)}, {"points", pts}, {"truncated", s.truncated}, {"flag", s.flag}};
}

nlohmann::json to_json(const SeparationReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"i", x.i},
                    {"t", x.t},
                    {"checked", x.checked},
                    {"r_rel_error", x.r_rel_error},
                    {"vol_rel_error", x.vol_rel_error},
                    {"r_ok", x.r_ok},
                    {"vol_ok", x.vol_ok},
                    {"covering_rate", x.covering_rate},
                    {"volume_rate", x.volume_rate}});
  return {{"rows", rows},
          {"last_gap", r.last_gap},
          {"separated", r.separated},
          {"within_tolerance", r.within_tolerance},
          {"tolerance", r.tolerance},
          {"from_level", r.from_level}};
}

}  // namespace dimentropy
