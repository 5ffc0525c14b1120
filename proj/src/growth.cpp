#include "dimentropy/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dimentropy/parallel.hpp"

namespace dimentropy {

namespace {

// Cell midpoints of the uniform g^k grid on Q^k, row-major.
Param midpoint(int k, int g, std::size_t index) {
  Param t(k);
  for (int a = k - 1; a >= 0; --a) {
    const auto i = static_cast<int>(index % static_cast<std::size_t>(g));
    index /= static_cast<std::size_t>(g);
    t(a) = -1.0 + (2.0 * i + 1.0) / g;
  }
  return t;
}

std::size_t node_count(int k, int g) {
  std::size_t n = 1;
  for (int a = 0; a < k; ++a) n *= static_cast<std::size_t>(g);
  return n;
}

int default_gridres(int k) {
  switch (k) {
    case 0: return 1;
    case 1: return 256;
    case 2: return 32;
    default: return 8;
  }
}

double gram_root(const Tangent& j, const std::vector<double>& weights) {
  Tangent wj = j;
  for (std::size_t a = 0; a < weights.size() && static_cast<Eigen::Index>(a) < wj.rows(); ++a)
    wj.row(static_cast<Eigen::Index>(a)) *= weights[a];
  const double det = (wj.transpose() * wj).determinant();
  return det > 0.0 ? std::sqrt(det) : 0.0;
}

// Quadrature of ||Lambda^k D(f^n o phi)|| for n = 0..horizon on a g^k midpoint grid.
std::vector<double> quadrature(const SmoothMap* f, const SingularDisk& phi, int horizon, int g,
                               const VolumeOptions& options) {
  const int k = phi.k();
  const std::size_t nodes = node_count(k, g);
  const double weight = std::pow(2.0 / g, k);
  const std::size_t blocks = std::min<std::size_t>(nodes, 256);
  const std::size_t per_block = (nodes + blocks - 1) / blocks;
  const auto len = static_cast<std::size_t>(horizon + 1);
  std::vector<double> partial(blocks * len, 0.0);
  const int every = std::max(1, options.reorthogonalize_every);

  parallel_for(blocks, [&](std::size_t b) {
    double* out = partial.data() + b * len;
    const std::size_t lo = b * per_block, hi = std::min(nodes, lo + per_block);
    for (std::size_t node = lo; node < hi; ++node) {
      const Param t = midpoint(k, g, node);
      Point x = phi.point(t);
      Tangent j = phi.tangent(t);
      double log_scale = 0.0;
      bool dead = false;
      for (int n = 0; n <= horizon; ++n) {
        if (!dead) out[n] += weight * std::exp(log_scale) * gram_root(j, options.metric_weights);
        if (n == horizon || dead || !f) continue;
        j = f->jacobian(x) * j;
        x = f->evaluate(x);
        if (k == 1) {
          const double norm = j.norm();
          if (norm == 0.0) {
            dead = true;
            continue;
          }
          log_scale += std::log(norm);
          j /= norm;
        } else if ((n + 1) % every == 0) {
          // Same span, Gram determinant rescaled by det(R)^2.
          Eigen::HouseholderQR<Tangent> qr(j);
          for (int a = 0; a < k; ++a) {
            const double ra = std::abs(qr.matrixQR()(a, a));
            if (ra == 0.0) dead = true;
            else log_scale += std::log(ra);
          }
          if (dead) continue;
          j = qr.householderQ() * Tangent::Identity(j.rows(), k);
        }
      }
    }
  });

  std::vector<double> values(len, 0.0);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t n = 0; n < len; ++n) values[n] += partial[b * len + n];
  return values;
}

}  // namespace

double disk_volume(const SingularDisk& psi, int gridres, bool* degenerate) {
  if (psi.k() == 0) {
    if (degenerate) *degenerate = false;
    return 1.0;
  }
  const int g = gridres > 0 ? gridres : 16 * default_gridres(psi.k());
  const double v = quadrature(nullptr, psi, 0, g, VolumeOptions{})[0];
  if (degenerate) *degenerate = v == 0.0;
  return v;
}

double tail_window_gamma(const std::vector<double>& log_values, int window, int* start) {
  const int total = static_cast<int>(log_values.size());
  if (start) *start = 0;
  if (total < 2) return 0.0;
  const int w = std::clamp(window, 2, total);
  const int first = (total - w) / 2;
  double best = -std::numeric_limits<double>::infinity();
  for (int s = first; s + w <= total; ++s) {
    std::vector<std::pair<int, double>> pts;
    bool finite = true;
    for (int n = s; n < s + w; ++n) {
      finite = finite && std::isfinite(log_values[static_cast<std::size_t>(n)]);
      pts.emplace_back(n, log_values[static_cast<std::size_t>(n)]);
    }
    if (!finite) continue;
    const double slope = least_squares_slope(pts);
    if (slope > best) {
      best = slope;
      if (start) *start = s;
    }
  }
  return std::isfinite(best) ? best : 0.0;
}

VolumeSeries volume_growth(const SmoothMap& f, const SingularDisk& phi, int horizon, const VolumeOptions& options) {
  if (horizon < 0) throw Error("volume_growth: horizon must be >= 0");
  if (phi.dim() != f.dim()) throw Error("volume_growth: disk and map live on different manifolds");
  VolumeSeries out;
  out.disk = phi.label();
  out.k = phi.k();
  int g = options.gridres > 0 ? options.gridres : default_gridres(phi.k());
  if (phi.k() == 0) g = 1;
  std::vector<double> values = quadrature(&f, phi, horizon, g, options);
  out.converged = phi.k() == 0;
  while (!out.converged) {
    const int next = 2 * g;
    if (next > options.max_gridres || node_count(phi.k(), next) > options.node_budget) break;
    std::vector<double> finer = quadrature(&f, phi, horizon, next, options);
    double change = 0.0;
    for (std::size_t n = 0; n < values.size(); ++n) {
      const double scale = std::max(std::abs(finer[n]), std::numeric_limits<double>::min());
      change = std::max(change, std::abs(finer[n] - values[n]) / scale);
    }
    out.last_change = change;
    values = std::move(finer);
    g = next;
    if (change < options.tolerance) out.converged = true;
  }
  out.gridres = g;
  out.values = values;
  out.degenerate = values.empty() || values[0] == 0.0;
  for (double v : values) out.log_values.push_back(v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity());
  out.gamma = tail_window_gamma(out.log_values, options.window, &out.gamma_start);
  return out;
}

CurveCheck length_vs_covering_check(const SmoothMap& f, const SingularDisk& phi, double eps, int horizon,
                                    std::size_t max_cloud, double tolerance) {
  if (phi.k() != 1) throw Error("length_vs_covering_check: phi must be a 1-disk");
  if (horizon < 1) throw Error("length_vs_covering_check: horizon must be >= 1");
  CurveCheck out;
  out.eps = eps;
  out.length0 = disk_volume(phi);
  if (std::abs(out.length0 - 1.0) > 1e-3) throw Error("length_vs_covering_check: phi must have unit length");

  const VolumeSeries lengths = volume_growth(f, phi, horizon - 1);
  const int res = cloud_gridres(phi, f, eps, horizon, 2.0, static_cast<int>(max_cloud)).first;
  const Cloud cloud = disk_cloud(phi, res);
  CoveringOptions opts;
  opts.saturation = 1.0;  // lower bounds stay valid past saturation
  const CoveringTable table = covering_table(f, cloud, {eps}, horizon, opts);
  const CoveringSeries& sep = table.separated.front();
  double running = 0.0;
  for (std::size_t j = 0; j < sep.horizons.size(); ++j) {
    const int n = sep.horizons[j];
    running = std::max(running, lengths.values[static_cast<std::size_t>(n - 1)]);
    out.horizons.push_back(n);
    out.lhs.push_back(eps * static_cast<double>(sep.counts[j]));
    out.rhs.push_back(running + 1.0);
    if (out.lhs.back() > out.rhs.back() + tolerance && out.holds) {
      out.holds = false;
      out.witness = n;
    }
  }
  return out;
}

MetricShift metric_invariance(const SmoothMap& f, const SingularDisk& phi, int horizon, const std::vector<double>& weights) {
  MetricShift out;
  out.weights = weights;
  out.gamma_flat = volume_growth(f, phi, horizon).gamma;
  VolumeOptions weighted;
  weighted.metric_weights = weights;
  out.gamma_weighted = volume_growth(f, phi, horizon, weighted).gamma;
  return out;
}

nlohmann::json to_json(const VolumeSeries& v) {
  nlohmann::json log_values = nlohmann::json::array();
  for (double x : v.log_values) log_values.push_back(std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr));
  return {{"disk", v.disk},         {"k", v.k},
          {"values", v.values},     {"log_values", log_values},
          {"gamma", v.gamma},       {"gamma_start", v.gamma_start},
          {"gridres", v.gridres},   {"converged", v.converged},
          {"degenerate", v.degenerate}, {"last_change", v.last_change}};
}

nlohmann::json to_json(const CurveCheck& c) {
  return {{"eps", c.eps},   {"horizons", c.horizons}, {"lhs", c.lhs},
          {"rhs", c.rhs},   {"holds", c.holds},       {"witness", c.witness ? nlohmann::json(*c.witness) : nlohmann::json(nullptr)},
          {"length0", c.length0}};
}

}  // namespace dimentropy
