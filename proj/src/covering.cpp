#include "dimentropy/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_map>

#include "dimentropy/parallel.hpp"

namespace dimentropy {

std::string to_string(CoverMethod m) { return m == CoverMethod::GreedyCover ? "greedy" : "separated"; }

Cloud disk_cloud(const SingularDisk& phi, int per_axis) {
  Cloud c;
  c.manifold = phi.manifold();
  const auto grid = parameter_grid(phi.k(), per_axis);
  c.points.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { c.points[i] = phi.point(grid[i]); });
  c.description = "disk:" + phi.label() + " grid=" + std::to_string(phi.k() == 0 ? 1 : std::max(per_axis, 2)) + "^" +
                  std::to_string(phi.k());
  return c;
}

Cloud manifold_cloud(const ManifoldModel& m, int per_axis) {
  Cloud c;
  c.manifold = m;
  c.points = manifold_grid(m, per_axis);
  c.description = "manifold:" + m.describe() + " grid=" + std::to_string(per_axis) + "^" + std::to_string(m.dim());
  return c;
}

std::pair<int, bool> cloud_gridres(const SingularDisk& phi, const SmoothMap& f, double eps, int n, double c, int cap) {
  if (!(eps > 0.0)) throw Error("cloud_gridres: eps must be positive");
  double dphi = 0.0;
  for (const Param& t : parameter_grid(phi.k(), 9)) {
    const Tangent j = phi.tangent(t);
    for (Eigen::Index col = 0; col < j.cols(); ++col) dphi = std::max(dphi, j.col(col).cwiseAbs().maxCoeff());
  }
  // Parameter spacing is 2/(res-1); scale so neighbours stay eps/c apart.
  const double growth = std::max(1.0, 2.0 * dphi * std::pow(f.lipschitz(), std::max(n - 1, 0)));
  const double want = std::ceil(c * growth / eps) + 1.0;
  if (want > cap) return {cap, true};
  return {std::max(2, static_cast<int>(want)), false};
}

double dynamic_distance(const SmoothMap& f, const Point& x, const Point& y, int n) {
  if (n < 1) throw Error("dynamic_distance: n must be >= 1");
  const ManifoldModel& m = f.manifold();
  Point a = m.canonical(x), b = m.canonical(y);
  double d = m.distance(a, b);
  for (int k = 1; k < n; ++k) {
    a = f.evaluate(a);
    b = f.evaluate(b);
    d = std::max(d, m.distance(a, b));
  }
  return d;
}

OrbitTable OrbitTable::shaped(const ManifoldModel& m, std::size_t points, int horizon) {
  OrbitTable o;
  o.dim = m.dim();
  o.horizon = horizon;
  o.size = points;
  for (int a = 0; a < m.dim(); ++a) o.axes.push_back(m.axis(a));
  o.data.assign(points * static_cast<std::size_t>(horizon) * static_cast<std::size_t>(o.dim), 0.0f);
  return o;
}

OrbitTable compute_orbits(const SmoothMap& f, const Cloud& cloud, int horizon, int workers) {
  OrbitTable o = OrbitTable::shaped(f.manifold(), cloud.points.size(), horizon);
  parallel_for(
      o.size,
      [&](std::size_t i) {
        Point x = f.manifold().canonical(cloud.points[i]);
        float* out = o.data.data() + i * static_cast<std::size_t>(horizon) * static_cast<std::size_t>(o.dim);
        for (int k = 0; k < horizon; ++k) {
          for (int a = 0; a < o.dim; ++a) *out++ = static_cast<float>(x(a));
          if (k + 1 < horizon) x = f.evaluate(x);
        }
      },
      workers);
  return o;
}

namespace {

// Greedy selection at one radius. Points are kept sorted by their cell code
// (cell index per time and axis, cells no narrower than rho), which makes the
// sorted array an implicit trie: a ball query descends it level by level,
// following only the cells adjacent to the center's cell, and the exact
// distance test runs only on the surviving leaves. The sort is refined one
// time step at a time as the horizon grows.
class RadiusIndex {
 public:
  RadiusIndex(const OrbitTable& orbits, double rho) : orb_(orbits), rho_(rho), m_(orbits.size) {
    const int d = orb_.dim;
    for (int a = 0; a < d; ++a) {
      const Axis& ax = orb_.axes[static_cast<std::size_t>(a)];
      circle_.push_back(ax.kind == AxisKind::Circle);
      lo_.push_back(ax.lo);
      span_.push_back(ax.hi - ax.lo);
      cells_.push_back(std::clamp(static_cast<int>(std::floor((ax.hi - ax.lo) / rho)), 1, 65535));
    }
    order_.resize(m_);
    std::iota(order_.begin(), order_.end(), 0u);
    group_.assign(m_, 0);
  }

  // Stops once `limit` centers are chosen; counts at or above a saturation
  // guard carry no rate information.
  std::vector<std::uint32_t> run(int n, const std::vector<std::uint32_t>& seeds1, const std::vector<std::uint32_t>& seeds2,
                                 std::size_t limit = std::numeric_limits<std::size_t>::max()) {
    refine_to(n);
    n_ = n;
    const std::size_t levels = static_cast<std::size_t>(n) * static_cast<std::size_t>(orb_.dim);
    std::vector<std::uint32_t> pos(m_);
    for (std::size_t p = 0; p < m_; ++p) pos[order_[p]] = static_cast<std::uint32_t>(p);
    next_.resize(m_ + 1);
    std::iota(next_.begin(), next_.end(), 0u);
    std::vector<std::uint32_t> centers;
    auto visit = [&](std::uint32_t i) {
      centers.push_back(i);
      cover(pos[i]);
      query(i, 0, levels, 0, m_);
    };
    for (const auto* seeds : {&seeds1, &seeds2})
      for (std::uint32_t i : *seeds) {
        if (centers.size() >= limit) return centers;
        if (find(pos[i]) == pos[i]) visit(i);
      }
    for (std::uint32_t i : visit_order()) {
      if (centers.size() >= limit) return centers;
      if (find(pos[i]) == pos[i]) visit(i);
    }
    return centers;
  }

 private:
  // Fixed pseudo-random order: a scan order aligned with the cloud grid biases
  // greedy packings of elongated dynamic balls.
  const std::vector<std::uint32_t>& visit_order() {
    if (visit_.size() != m_) {
      visit_.resize(m_);
      std::iota(visit_.begin(), visit_.end(), 0u);
      std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
      for (std::size_t i = m_; i > 1; --i) std::swap(visit_[i - 1], visit_[static_cast<std::size_t>(rng() % i)]);
    }
    return visit_;
  }

  int cell(std::size_t i, int k, int a) const {
    const double u = (orb_.at(i, k)[a] - lo_[static_cast<std::size_t>(a)]) / span_[static_cast<std::size_t>(a)];
    const int c = cells_[static_cast<std::size_t>(a)];
    int idx = static_cast<int>(std::floor(u * c));
    if (circle_[static_cast<std::size_t>(a)]) {
      idx %= c;
      if (idx < 0) idx += c;
    } else {
      idx = std::clamp(idx, 0, c - 1);
    }
    return idx;
  }

  void refine_to(int n) {
    const int d = orb_.dim;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(m_);
    while (refined_ < n) {
      const int k = refined_;
      for (int a = 0; a < d; ++a) {
        for (std::size_t p = 0; p < m_; ++p) {
          const std::uint32_t i = order_[p];
          keyed[p] = {(static_cast<std::uint64_t>(group_[p]) << 16) | static_cast<std::uint64_t>(cell(i, k, a)), i};
        }
        std::sort(keyed.begin(), keyed.end());
        std::vector<std::uint16_t> level(m_);
        for (std::size_t p = 0; p < m_; ++p) {
          order_[p] = keyed[p].second;
          level[p] = static_cast<std::uint16_t>(keyed[p].first & 0xffffu);
        }
        // Earlier levels follow the new order (the sort is stable on prefixes).
        std::uint32_t gid = 0;
        for (std::size_t p = 0; p < m_; ++p) {
          if (p > 0 && keyed[p].first != keyed[p - 1].first) ++gid;
          group_[p] = gid;
        }
        levels_.push_back(std::move(level));
      }
      ++refined_;
    }
  }

  std::uint32_t find(std::uint32_t p) {
    while (next_[p] != p) {
      next_[p] = next_[next_[p]];
      p = next_[p];
    }
    return p;
  }
  void cover(std::uint32_t p) { next_[p] = p + 1; }

  bool within(std::size_t i, std::size_t j) const {
    const int d = orb_.dim;
    const float frho = static_cast<float>(rho_);
    for (int k = 0; k < n_; ++k) {
      const float* a = orb_.at(i, k);
      const float* b = orb_.at(j, k);
      for (int ax = 0; ax < d; ++ax) {
        float delta = std::abs(a[ax] - b[ax]);
        if (circle_[static_cast<std::size_t>(ax)]) delta = std::min(delta, 1.0f - delta);
        if (delta >= frho) return false;
      }
    }
    return true;
  }

  void query(std::uint32_t i, std::size_t level, std::size_t levels, std::size_t lo, std::size_t hi) {
    if (find(static_cast<std::uint32_t>(lo)) >= hi) return;
    if (level == levels || hi - lo <= 16) {
      for (std::uint32_t p = find(static_cast<std::uint32_t>(lo)); p < hi; p = find(p + 1)) {
        if (within(i, order_[p])) cover(p);
      }
      return;
    }
    const int d = orb_.dim;
    const int k = static_cast<int>(level) / d, a = static_cast<int>(level) % d;
    const int c = cells_[static_cast<std::size_t>(a)];
    const int home = cell(i, k, a);
    const std::vector<std::uint16_t>& lv = levels_[level];
    int vals[3];
    int nv = 0;
    for (int off = -1; off <= 1; ++off) {
      int v = home + off;
      if (circle_[static_cast<std::size_t>(a)]) {
        v = ((v % c) + c) % c;
      } else if (v < 0 || v >= c) {
        continue;
      }
      bool dup = false;
      for (int q = 0; q < nv; ++q) dup = dup || vals[q] == v;
      if (!dup) vals[nv++] = v;
    }
    for (int q = 0; q < nv; ++q) {
      const auto first = lv.begin() + static_cast<std::ptrdiff_t>(lo);
      const auto last = lv.begin() + static_cast<std::ptrdiff_t>(hi);
      const auto range = std::equal_range(first, last, static_cast<std::uint16_t>(vals[q]));
      if (range.first == range.second) continue;
      query(i, level + 1, levels, static_cast<std::size_t>(range.first - lv.begin()),
            static_cast<std::size_t>(range.second - lv.begin()));
    }
  }

  const OrbitTable& orb_;
  double rho_;
  std::size_t m_;
  int n_ = 0;
  int refined_ = 0;
  std::vector<bool> circle_;
  std::vector<double> lo_, span_;
  std::vector<int> cells_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> group_;
  std::vector<std::vector<std::uint16_t>> levels_;
  std::vector<std::uint32_t> next_;
  std::vector<std::uint32_t> visit_;
};

std::size_t orbit_bytes(std::size_t points, int horizon, int dim) {
  return points * static_cast<std::size_t>(horizon) * static_cast<std::size_t>(dim) * sizeof(float);
}

}  // namespace

std::vector<std::uint32_t> greedy_centers(const OrbitTable& orbits, double rho, int n,
                                          const std::vector<std::uint32_t>& seeds1,
                                          const std::vector<std::uint32_t>& seeds2) {
  if (n < 1 || n > orbits.horizon) throw Error("greedy_centers: horizon outside the stored orbits");
  if (!(rho > 0.0)) throw Error("greedy_centers: radius must be positive");
  RadiusIndex index(orbits, rho);
  return index.run(n, seeds1, seeds2);
}

CoveringEstimate covering_number(const SmoothMap& f, const Cloud& cloud, double eps, int n, CoverMethod method) {
  if (cloud.points.empty()) throw Error("covering_number: empty cloud");
  if (!(eps > 0.0)) throw Error("covering_number: eps must be positive");
  if (n < 1) throw Error("covering_number: n must be >= 1");
  const OrbitTable orb = compute_orbits(f, cloud, n, 0);
  const double rho = method == CoverMethod::GreedyCover ? eps : 2.0 * eps;
  const auto centers = greedy_centers(orb, rho, n);
  return CoveringEstimate{eps, n, centers.size(), method, cloud.description, cloud.points.size()};
}

CoveringTable covering_table(const SmoothMap& f, const Cloud& cloud, std::vector<double> eps_schedule, int n_max,
                             const CoveringOptions& options) {
  if (cloud.points.empty()) throw Error("covering_table: empty cloud");
  if (n_max < 1) throw Error("covering_table: n_max must be >= 1");
  bool capped = false;
  const std::size_t per_step = orbit_bytes(cloud.points.size(), 1, f.dim());
  if (per_step * static_cast<std::size_t>(n_max) > options.budget_bytes) {
    n_max = std::max<int>(1, static_cast<int>(options.budget_bytes / std::max<std::size_t>(per_step, 1)));
    capped = true;
  }
  CoveringTable table = covering_table(compute_orbits(f, cloud, n_max, options.workers), std::move(eps_schedule),
                                       options, cloud.description);
  table.budget_capped = capped;
  return table;
}

CoveringTable covering_table(const OrbitTable& orbits, std::vector<double> eps_schedule, const CoveringOptions& options,
                             const std::string& sample) {
  if (orbits.size == 0) throw Error("covering_table: empty cloud");
  if (eps_schedule.empty()) throw Error("covering_table: empty eps schedule");
  for (double e : eps_schedule)
    if (!(e > 0.0)) throw Error("covering_table: eps must be positive");
  const int n_max = orbits.horizon;
  CoveringTable table;
  table.cloud_size = orbits.size;
  table.n_max = n_max;

  std::vector<std::size_t> by_eps(eps_schedule.size());
  std::iota(by_eps.begin(), by_eps.end(), 0);
  std::stable_sort(by_eps.begin(), by_eps.end(), [&](std::size_t a, std::size_t b) { return eps_schedule[a] > eps_schedule[b]; });
  table.greedy.resize(eps_schedule.size());
  table.separated.resize(eps_schedule.size());
  const auto guard = static_cast<double>(orbits.size) * options.saturation;
  const auto limit = static_cast<std::size_t>(std::ceil(guard));

  for (CoverMethod method : {CoverMethod::GreedyCover, CoverMethod::MaximalSeparated}) {
    if (method == CoverMethod::MaximalSeparated && !options.separated) break;
    std::vector<std::vector<std::uint32_t>> prev;  // centers per horizon at the next larger eps
    for (std::size_t idx : by_eps) {
      const double eps = eps_schedule[idx];
      const double rho = method == CoverMethod::GreedyCover ? eps : 2.0 * eps;
      CoveringSeries s;
      s.eps = eps;
      s.method = method;
      s.cloud_size = orbits.size;
      s.sample = sample;
      std::vector<std::vector<std::uint32_t>> cur;
      std::vector<std::uint32_t> last;
      RadiusIndex engine(orbits, rho);
      for (int n = 1; n <= n_max; ++n) {
        auto a = engine.run(n, last, {}, limit);
        const std::size_t ni = static_cast<std::size_t>(n - 1);
        if (ni < prev.size() && prev[ni].size() > a.size()) {
          auto b = engine.run(n, prev[ni], last, limit);
          if (b.size() > a.size()) a = std::move(b);
        }
        s.horizons.push_back(n);
        s.counts.push_back(a.size());
        last = a;
        cur.push_back(std::move(a));
        if (static_cast<double>(last.size()) >= guard) {
          s.saturated_at = n;
          break;
        }
      }
      prev = std::move(cur);
      (method == CoverMethod::GreedyCover ? table.greedy : table.separated)[idx] = std::move(s);
    }
  }
  return table;
}

double least_squares_slope(const std::vector<std::pair<int, double>>& pts, double* rms_residual) {
  if (pts.size() < 2) throw Error("least squares slope needs at least two points");
  double mx = 0.0, my = 0.0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw Error("least squares slope needs distinct abscissae");
  const double slope = sxy / sxx;
  if (rms_residual) {
    double ss = 0.0;
    for (auto [x, y] : pts) {
      const double r = y - (my + slope * (x - mx));
      ss += r * r;
    }
    *rms_residual = std::sqrt(ss / static_cast<double>(pts.size()));
  }
  return slope;
}

RateEstimate fit_rate(const std::vector<CoveringSeries>& series, const FitOptions& options) {
  if (series.size() < 2) throw Error("fit_rate needs at least two eps values");
  RateEstimate out;
  std::vector<std::size_t> order(series.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return series[a].eps < series[b].eps; });
  std::optional<std::size_t> chosen;
  std::vector<std::vector<std::pair<int, double>>> windows(series.size());
  for (std::size_t i : order) {
    const CoveringSeries& s = series[i];
    out.eps_schedule.push_back(s.eps);
    if (s.horizons.size() < 3 && !s.saturated_at) throw Error("fit_rate needs at least three horizons per eps");
    std::vector<std::pair<int, double>> w;
    const double guard = options.saturation * static_cast<double>(s.cloud_size);
    for (std::size_t j = 0; j < s.horizons.size(); ++j) {
      if (s.horizons[j] < options.n_min) continue;
      if (static_cast<double>(s.counts[j]) >= guard) break;
      w.emplace_back(s.horizons[j], std::log(static_cast<double>(std::max<std::size_t>(s.counts[j], 1))));
    }
    if (options.tail > 0 && static_cast<int>(w.size()) > options.tail) w.erase(w.begin(), w.end() - options.tail);
    PerEpsSlope p;
    p.eps = s.eps;
    p.saturated_at = s.saturated_at;
    if (static_cast<int>(w.size()) >= std::max(options.min_points, 2)) {
      p.slope = least_squares_slope(w, &p.residual);
      p.n_lo = w.front().first;
      p.n_hi = w.back().first;
      if (!chosen) chosen = i;
    }
    windows[i] = std::move(w);
    out.per_eps.push_back(p);
  }
  for (std::size_t a = 0; a + 1 < order.size(); ++a) {
    const CoveringSeries& small = series[order[a]];
    const CoveringSeries& big = series[order[a + 1]];
    const std::size_t shared = std::min(small.counts.size(), big.counts.size());
    for (std::size_t j = 0; j < shared; ++j)
      if (small.counts[j] < big.counts[j]) out.monotone_in_eps = false;
  }
  if (!chosen) {
    std::string where;
    for (const CoveringSeries& s : series)
      where += " eps=" + std::to_string(s.eps) + ":n=" + (s.saturated_at ? std::to_string(*s.saturated_at) : std::string("-"));
    throw Error("all windows saturated; increase cloud resolution (saturation at" + where + ")");
  }
  out.pairs = windows[*chosen];
  out.slope = least_squares_slope(out.pairs, &out.residual);
  out.n_lo = out.pairs.front().first;
  out.n_hi = out.pairs.back().first;
  out.eps = series[*chosen].eps;
  return out;
}

double subadditivity_slack(const CoveringSeries& series) {
  double slack = 0.0;
  const auto count_at = [&](int n) { return std::log(static_cast<double>(series.counts[static_cast<std::size_t>(n - 1)])); };
  const int top = static_cast<int>(series.counts.size());
  for (int n = 1; n < top; ++n)
    for (int m = 1; n + m <= top; ++m) slack = std::max(slack, count_at(n + m) - count_at(n) - count_at(m));
  return slack;
}

void write_csv(std::ostream& os, const CoveringTable& table) {
  os << "eps,n,method,count,cloud_size\n";
  for (const auto* group : {&table.greedy, &table.separated})
    for (const CoveringSeries& s : *group)
      for (std::size_t j = 0; j < s.horizons.size(); ++j)
        os << s.eps << ',' << s.horizons[j] << ',' << to_string(s.method) << ',' << s.counts[j] << ',' << s.cloud_size << '\n';
}

}  // namespace dimentropy
