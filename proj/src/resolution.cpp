#include "dimentropy/resolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "dimentropy/covering.hpp"
#include "dimentropy/parallel.hpp"

namespace dimentropy {

namespace {

struct Cube {
  Param center, half;
  int level = 0;
};

std::vector<Cube> split(const Cube& c) {
  const int k = static_cast<int>(c.center.size());
  std::vector<Cube> out;
  const std::size_t total = std::size_t{1} << k;
  for (std::size_t mask = 0; mask < total; ++mask) {
    Cube child{c.center, c.half / 2.0, c.level + 1};
    for (int a = 0; a < k; ++a) child.center(a) += ((mask >> a) & 1 ? 1.0 : -1.0) * child.half(a);
    out.push_back(child);
  }
  return out;
}

SingularDisk composed(const SingularDisk& phi, const std::shared_ptr<const SmoothMap>& f, const Cube& c, int time) {
  SingularDisk piece = phi.restrict(c.center, c.half);
  return time == 0 ? piece : piece.push_forward(f, time);
}

bool inside(const ResolutionNode& node, const Param& t) {
  for (Eigen::Index a = 0; a < t.size(); ++a)
    if (std::abs(t(a) - node.center(a)) > node.half(a) * (1.0 + 1e-12)) return false;
  return true;
}

ResolutionTree truncate(const ResolutionTree& tree, int n) {
  ResolutionTree out = tree;
  out.order_n = n;
  out.nodes.clear();
  std::vector<int> remap(tree.nodes.size(), -1);
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (tree.nodes[i].time > n) continue;
    ResolutionNode node = tree.nodes[i];
    if (node.parent >= 0) node.parent = remap[static_cast<std::size_t>(node.parent)];
    remap[i] = static_cast<int>(out.nodes.size());
    out.nodes.push_back(node);
  }
  out.words.resize(static_cast<std::size_t>(n + 1));
  out.leaf_count = out.words.back();
  out.failures.clear();
  for (std::size_t i = 0; i < out.nodes.size(); ++i)
    if (!out.nodes[i].ok) out.failures.push_back(i);
  out.complete = out.failures.empty() && tree.failure.empty();
  return out;
}

double fit_or_zero(const std::vector<std::pair<int, double>>& pts) {
  return pts.size() >= 2 ? least_squares_slope(pts) : 0.0;
}

}  // namespace

std::vector<std::size_t> ResolutionTree::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].time == order_n) out.push_back(i);
  return out;
}

std::vector<int> ResolutionTree::depth_histogram() const {
  std::vector<int> hist;
  for (std::size_t i : leaves()) {
    const auto level = static_cast<std::size_t>(nodes[i].level);
    if (hist.size() <= level) hist.resize(level + 1, 0);
    ++hist[level];
  }
  return hist;
}

ResolutionTree build_resolution(const SmoothMap& f, const SingularDisk& phi, int r, int n, const ResolutionOptions& options) {
  if (r < 0 || r == kInfiniteOrder) throw Error("build_resolution needs a finite order r");
  if (n < 0) throw Error("build_resolution: n must be >= 0");
  if (phi.dim() != f.dim()) throw Error("build_resolution: disk and map live on different manifolds");
  const auto fp = std::make_shared<const SmoothMap>(f);
  const int k = phi.k();
  ResolutionTree tree;
  tree.disk = phi.label();
  tree.r = r;
  tree.order_n = n;
  tree.k = k;

  const auto settle = [&](const Cube& start, int time, std::vector<ResolutionNode>& out, std::size_t& failures) {
    std::vector<Cube> stack{start};
    while (!stack.empty()) {
      const Cube c = stack.back();
      stack.pop_back();
      const double size = cr_size(composed(phi, fp, c, time), r, options.convention, options.h_fd, options.gridres).value;
      const bool ok = size <= 1.0 + options.size_tolerance;
      if (ok || c.level >= options.max_level) {
        out.push_back({time, c.level, c.center, c.half, -1, size, ok});
        if (!ok) ++failures;
        continue;
      }
      auto kids = split(c);
      // Depth-first in mask order: push in reverse.
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
  };

  std::vector<std::size_t> frontier;
  for (int time = 0; time <= n; ++time) {
    std::vector<Cube> starts;
    if (time == 0) starts.push_back(Cube{Param::Zero(k), Param::Ones(k), 0});
    else
      for (std::size_t p : frontier) starts.push_back(Cube{tree.nodes[p].center, tree.nodes[p].half, tree.nodes[p].level});
    std::vector<std::vector<ResolutionNode>> children(starts.size());
    std::vector<std::size_t> fails(starts.size(), 0);
    parallel_for(
        starts.size(), [&](std::size_t i) { settle(starts[i], time, children[i], fails[i]); }, options.workers);
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < starts.size(); ++i) {
      for (ResolutionNode& node : children[i]) {
        node.parent = time == 0 ? -1 : static_cast<int>(frontier[i]);
        if (!node.ok) tree.failures.push_back(tree.nodes.size());
        next.push_back(tree.nodes.size());
        tree.nodes.push_back(std::move(node));
      }
    }
    tree.words.push_back(next.size());
    frontier = std::move(next);
    if (tree.nodes.size() > options.max_nodes && time < n) {
      tree.failure = "node budget exhausted at time " + std::to_string(time);
      tree.order_n = time;
      break;
    }
  }
  tree.leaf_count = tree.words.back();
  tree.complete = tree.failures.empty() && tree.failure.empty();
  if (!tree.failures.empty() && tree.failure.empty())
    tree.failure = std::to_string(tree.failures.size()) + " nodes hit the split limit without meeting the size bound";
  return tree;
}

ResolutionRate resolution_entropy(const SmoothMap& f, const DiskFamily& family, int r, const std::vector<int>& horizons,
                                  const ResolutionOptions& options) {
  if (horizons.size() < 2) throw Error("resolution_entropy needs at least two horizons");
  ResolutionRate out;
  out.horizons = horizons;
  const int top = *std::max_element(horizons.begin(), horizons.end());
  const FamilyMembers members = enumerate(family);
  out.partial = members.truncated;
  std::vector<double> best(horizons.size(), 0.0);
  for (const SingularDisk& phi : members.members) {
    const ResolutionTree tree = build_resolution(f, phi, r, top, options);
    if (!tree.complete) out.partial = true;
    std::vector<std::size_t> counts;
    std::vector<std::pair<int, double>> pts;
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      const auto h = static_cast<std::size_t>(horizons[i]);
      const std::size_t c = h < tree.words.size() ? tree.words[h] : 0;
      counts.push_back(c);
      if (c > 0) {
        pts.emplace_back(horizons[i], std::log(static_cast<double>(c)));
        best[i] = std::max(best[i], std::log(static_cast<double>(c)));
      }
    }
    out.disks.push_back(phi.label());
    out.leaves.push_back(counts);
    out.per_disk_rate.push_back(fit_or_zero(pts));
  }
  if (!out.per_disk_rate.empty()) out.h_R = *std::max_element(out.per_disk_rate.begin(), out.per_disk_rate.end());
  std::vector<std::pair<int, double>> pts;
  for (std::size_t i = 0; i < horizons.size(); ++i) pts.emplace_back(horizons[i], best[i]);
  out.H_R = fit_or_zero(pts);
  return out;
}

CoverCheck check_cover_property(const SmoothMap& f, const SingularDisk& phi, const ResolutionTree& tree, double eps,
                                int cloud_per_axis) {
  if (!(eps > 0.0)) throw Error("check_cover_property: eps must be positive");
  CoverCheck out;
  out.eps = eps;
  const int k = phi.k();
  const int n = std::max(tree.order_n, 1);
  const std::vector<std::size_t> leaves = tree.leaves();
  if (k == 0) {
    out.points = 1;
    return out;
  }
  // Partials of each composed piece are <= 1, so a sample offset of at most
  // 1/(g-1) per parameter axis moves every coordinate by < eps.
  const int g = static_cast<int>(std::ceil(k / eps)) + 2;
  if (cloud_per_axis <= 0) cloud_per_axis = k == 1 ? 4097 : (k == 2 ? 129 : 17);
  const auto cloud = parameter_grid(k, cloud_per_axis);
  out.points = cloud.size();
  std::vector<char> bad(cloud.size(), 0);
  std::vector<double> worst(cloud.size(), 0.0);

  const auto sample = [&](const ResolutionNode& leaf, const std::vector<int>& idx) {
    Param s(k);
    for (int a = 0; a < k; ++a) s(a) = leaf.center(a) + leaf.half(a) * (-1.0 + 2.0 * idx[static_cast<std::size_t>(a)] / (g - 1));
    return phi.point(s);
  };

  parallel_for(cloud.size(), [&](std::size_t i) {
    const Param& t = cloud[i];
    const ResolutionNode* leaf = nullptr;
    for (std::size_t li : leaves)
      if (inside(tree.nodes[li], t)) {
        leaf = &tree.nodes[li];
        break;
      }
    if (!leaf) {
      bad[i] = 1;
      worst[i] = std::numeric_limits<double>::infinity();
      return;
    }
    const Point x = phi.point(t);
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) {
      const double s = (t(a) - leaf->center(a)) / leaf->half(a);
      idx[static_cast<std::size_t>(a)] = std::clamp(static_cast<int>(std::lround((s + 1.0) / 2.0 * (g - 1))), 0, g - 1);
    }
    double best = dynamic_distance(f, x, sample(*leaf, idx), n);
    if (best >= eps) {
      // Fall back to every sample of the leaf before calling it a violation.
      std::vector<int> j(static_cast<std::size_t>(k), 0);
      std::size_t total = 1;
      for (int a = 0; a < k; ++a) total *= static_cast<std::size_t>(g);
      for (std::size_t c = 0; c < total && best >= eps; ++c) {
        std::size_t rest = c;
        for (int a = 0; a < k; ++a) {
          j[static_cast<std::size_t>(a)] = static_cast<int>(rest % static_cast<std::size_t>(g));
          rest /= static_cast<std::size_t>(g);
        }
        best = std::min(best, dynamic_distance(f, x, sample(*leaf, j), n));
      }
    }
    worst[i] = best;
    bad[i] = best >= eps;
  });
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    out.violations += bad[i] ? 1 : 0;
    out.worst = std::max(out.worst, worst[i]);
  }
  out.holds = out.violations == 0;
  return out;
}

ResolutionLaws check_resolution_laws(const SmoothMap& f, const SingularDisk& phi, int r, int n, int m, double eps,
                                     double alpha, const ResolutionOptions& options) {
  if (n < 1 || m < 1) throw Error("check_resolution_laws needs n, m >= 1");
  ResolutionLaws out;
  out.disk = phi.label();
  out.k = phi.k();
  out.r = r;
  out.n = n;
  out.m = m;
  out.eps = eps;
  out.alpha = alpha;
  const ResolutionTree full = build_resolution(f, phi, r, n + m, options);
  out.complete = full.complete;
  const auto words = [&](int t) { return t < static_cast<int>(full.words.size()) ? full.words[static_cast<std::size_t>(t)] : 0; };
  out.leaf_n = words(n);
  out.leaf_m = words(m);
  out.leaf_nm = words(n + m);
  if (out.leaf_n > 0 && out.leaf_m > 0)
    out.submultiplicative_slack = static_cast<double>(out.leaf_nm) / (static_cast<double>(out.leaf_n) * static_cast<double>(out.leaf_m));
  out.submultiplicative = out.submultiplicative_slack <= std::ldexp(1.0, out.k);

  out.cover = check_cover_property(f, phi, truncate(full, n), eps);

  // Sandwich on horizons 1..n+m against greedy covering counts of the disk.
  const int top = std::min(n + m, full.order_n);
  const int per_axis_cap = out.k <= 1 ? (1 << 20) : static_cast<int>(std::pow(double(1 << 20), 1.0 / out.k));
  const int res = cloud_gridres(phi, f, eps, top, 2.0, per_axis_cap).first;
  const CoveringTable table = covering_table(f, disk_cloud(phi, res), {eps}, top);
  const CoveringSeries& cover = table.greedy.front();
  const double lip = std::max(f.lipschitz(), 1.0);
  out.rate_allowance = (static_cast<double>(out.k) / std::max(r, 1) + alpha) * std::log(lip);
  std::vector<std::pair<int, double>> lp, cp;
  out.log_c_lower = std::numeric_limits<double>::infinity();
  out.log_c_upper = -std::numeric_limits<double>::infinity();
  const double guard = 0.5 * static_cast<double>(cover.cloud_size);
  for (std::size_t j = 0; j < cover.horizons.size(); ++j) {
    const int t = cover.horizons[j];
    if (static_cast<double>(cover.counts[j]) >= guard) break;
    const double ll = std::log(static_cast<double>(words(t))), lr = std::log(static_cast<double>(cover.counts[j]));
    out.horizons.push_back(t);
    out.leaf_counts.push_back(words(t));
    out.covering_counts.push_back(cover.counts[j]);
    out.log_c_lower = std::min(out.log_c_lower, ll - lr - out.k * std::log(eps));
    out.log_c_upper = std::max(out.log_c_upper, ll - lr - out.rate_allowance * t);
    lp.emplace_back(t, ll);
    cp.emplace_back(t, lr);
  }
  out.leaf_rate = fit_or_zero(lp);
  out.covering_rate = fit_or_zero(cp);
  // With the constants fitted, the content of the sandwich is the rate bracket.
  const double tol = 0.05;
  out.sandwich = lp.size() >= 2 && out.leaf_rate >= out.covering_rate - tol &&
                 out.leaf_rate <= out.covering_rate + out.rate_allowance + tol;
  return out;
}

nlohmann::json to_json(const ResolutionTree& t) {
  return {{"disk", t.disk},         {"r", t.r},
          {"order_n", t.order_n},   {"k", t.k},
          {"words", t.words},       {"leaf_count", t.leaf_count},
          {"upper_bound", true},    {"complete", t.complete},
          {"failures", t.failures.size()}, {"failure", t.failure},
          {"depth_histogram", t.depth_histogram()}};
}

nlohmann::json to_json(const ResolutionRate& r) {
  return {{"horizons", r.horizons}, {"disks", r.disks}, {"leaves", r.leaves}, {"per_disk_rate", r.per_disk_rate},
          {"h_R", r.h_R},           {"H_R", r.H_R},     {"partial", r.partial}};
}

nlohmann::json to_json(const ResolutionLaws& l) {
  const auto finite = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"disk", l.disk},
          {"k", l.k},
          {"r", l.r},
          {"n", l.n},
          {"m", l.m},
          {"submultiplicative", {{"leaf_n", l.leaf_n}, {"leaf_m", l.leaf_m}, {"leaf_nm", l.leaf_nm},
                                 {"slack", l.submultiplicative_slack}, {"holds", l.submultiplicative}}},
          {"cover", {{"holds", l.cover.holds}, {"points", l.cover.points}, {"violations", l.cover.violations},
                     {"worst", finite(l.cover.worst)}, {"eps", l.cover.eps}}},
          {"sandwich", {{"eps", l.eps}, {"alpha", l.alpha}, {"horizons", l.horizons}, {"leaf_counts", l.leaf_counts},
                        {"covering_counts", l.covering_counts}, {"log_c_lower", finite(l.log_c_lower)},
                        {"log_c_upper", finite(l.log_c_upper)}, {"leaf_rate", l.leaf_rate},
                        {"covering_rate", l.covering_rate}, {"rate_allowance", l.rate_allowance}, {"holds", l.sandwich}}},
          {"complete", l.complete}};
}

}  // namespace dimentropy
