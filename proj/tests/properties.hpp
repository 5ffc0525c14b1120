#pragma once

// Randomized and catalog-wide property checks shared by the unit suite and
// the acceptance driver.

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dimentropy/covering.hpp"
#include "dimentropy/entropies.hpp"
#include "dimentropy/experiments.hpp"
#include "dimentropy/growth.hpp"
#include "dimentropy/lyapunov.hpp"

namespace props {

using namespace dimentropy;

struct Outcome {
  bool ok = true;
  int cases = 0;
  int skipped = 0;
  std::string detail;
  void fail(const std::string& what) {
    if (ok) detail = what;
    ok = false;
  }
};

inline std::vector<std::pair<std::string, nlohmann::json>> catalog_runs() {
  return {{"identity", nlohmann::json::object()},
          {"rotation", nlohmann::json::object()},
          {"logistic", nlohmann::json::object()},
          {"quadratic", {{"a", 1.8}}},
          {"toral", {{"matrix", {{2, 0}, {0, 3}}}}},
          {"cat", nlohmann::json::object()},
          {"coupled_quadratic", {{"eps", 0.01}}},
          {"f_lambda", {{"lambda", 0.0}}},
          {"f_lambda", {{"lambda", 0.5}}},
          {"circle_logistic_product", nlohmann::json::object()}};
}

inline std::string name_of(const std::pair<std::string, nlohmann::json>& s) { return s.first + s.second.dump(); }

// Greedy centers are an eps-net of the cloud and eps-separated; the 2 eps
// packing is no larger; counts grow with n and shrink with eps.
inline Outcome covering_sandwich(int configs, std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed);
  const auto systems = catalog_runs();
  for (int c = 0; c < configs; ++c) {
    const auto& sys = systems[rng() % systems.size()];
    const SmoothMap f = build_system(sys.first, sys.second);
    const int per_axis = f.dim() == 1 ? 150 + static_cast<int>(rng() % 250) : 10 + static_cast<int>(rng() % 10);
    const Cloud cloud = manifold_cloud(f.manifold(), per_axis);
    const int n = 1 + static_cast<int>(rng() % 5);
    std::uniform_real_distribution<double> ue(0.03, 0.3);
    const double e1 = ue(rng), e2 = 0.5 * e1;
    std::ostringstream tag;
    tag << name_of(sys) << " cloud " << cloud.points.size() << " n " << n << " eps " << e1;
    const OrbitTable orbits = compute_orbits(f, cloud, n, 1);
    const auto centers = greedy_centers(orbits, e1, n);
    for (std::size_t i = 0; i < centers.size() && out.ok; ++i)
      for (std::size_t j = i + 1; j < centers.size(); ++j)
        if (dynamic_distance(f, cloud.points[centers[i]], cloud.points[centers[j]], n) < e1 - 1e-5) {
          out.fail(tag.str() + ": centers closer than eps");
          break;
        }
    for (const Point& p : cloud.points) {
      double best = 1e300;
      for (auto k : centers) best = std::min(best, dynamic_distance(f, p, cloud.points[k], n));
      if (best >= e1 + 1e-5) {
        out.fail(tag.str() + ": point not covered");
        break;
      }
    }
    CoveringOptions opts;
    opts.saturation = 2.0;
    opts.workers = 1;
    const CoveringTable t = covering_table(f, cloud, {e1, e2}, n, opts);
    for (std::size_t e = 0; e < 2; ++e)
      for (std::size_t i = 0; i < t.greedy[e].counts.size(); ++i) {
        if (t.separated[e].counts[i] > t.greedy[e].counts[i]) out.fail(tag.str() + ": packing exceeds cover");
        if (i > 0 && t.greedy[e].counts[i] < t.greedy[e].counts[i - 1]) out.fail(tag.str() + ": count decreased in n");
      }
    for (std::size_t i = 0; i < t.greedy[0].counts.size(); ++i)
      if (t.greedy[1].counts[i] < t.greedy[0].counts[i]) out.fail(tag.str() + ": count grew with eps");
    ++out.cases;
  }
  return out;
}

inline Outcome profile_monotonicity() {
  Outcome out;
  EntropySchedule s;
  s.eps = {0.1, 0.05};
  s.n_max = 8;
  s.max_cloud = std::size_t{1} << 13;
  for (const auto& sys : catalog_runs()) {
    const SmoothMap f = build_system(sys.first, sys.second);
    std::vector<DiskFamily> fams;
    for (int k = 0; k <= f.dim(); ++k) fams.push_back(default_family(f, k));
    const DimensionalEntropyProfile p = build_profile(f, fams, s);
    if (p.h_lower.front() != 0.0 || p.H_lower.front() != 0.0) out.fail(name_of(sys) + ": h^0 != 0");
    for (std::size_t k = 0; k < p.h_lower.size(); ++k) {
      if (p.h_lower[k] > p.H_lower[k] + 1e-12) out.fail(name_of(sys) + ": h > H");
      if (k > 0 && (p.h_lower[k] < p.h_lower[k - 1] || p.H_lower[k] < p.H_lower[k - 1]))
        out.fail(name_of(sys) + ": not monotone in k");
    }
    ++out.cases;
  }
  return out;
}

inline Outcome qr_telescoping() {
  Outcome out;
  for (const auto& sys : catalog_runs()) {
    const SmoothMap f = build_system(sys.first, sys.second);
    for (std::uint64_t seed : {1, 2}) {
      const LyapunovSpectrum s = lyapunov_spectrum(f, random_point(f.manifold(), seed), 5000, 50);
      // Both sides are -infinity once the orbit meets det Df = 0; the clamped
      // logs are not comparable there.
      if (s.singular_hits > 0) {
        ++out.skipped;
        continue;
      }
      const double gap = std::abs(s.sum() - s.log_det_average);
      if (!(gap < 1e-6)) out.fail(name_of(sys) + ": |sum - log det| = " + std::to_string(gap));
      ++out.cases;
    }
  }
  return out;
}

inline Outcome metric_invariance_suite() {
  Outcome out;
  const SmoothMap cat = build_system("cat");
  const SmoothMap t23 = build_system("toral", {{"matrix", {{2, 0}, {0, 3}}}});
  const SmoothMap q = build_system("coupled_quadratic", {{"eps", 0.01}});
  const SmoothMap lg = build_system("logistic");
  struct Run {
    const SmoothMap* f;
    SingularDisk phi;
    std::vector<double> w;
    int horizon;
  };
  const std::vector<Run> runs = {
      {&cat, SingularDisk::segment(cat.manifold(), make_point({0.1, 0.2}), make_point({1.0, 0.3}), 0.5), {1.0, 2.0}, 14},
      {&cat, SingularDisk::chart_cube(cat.manifold()), {2.0, 0.5}, 8},
      {&t23, SingularDisk::segment(t23.manifold(), make_point({0.1, 0.2}), make_point({1.0, 1.414}), 1.0), {0.5, 2.0}, 14},
      {&q, SingularDisk::segment(q.manifold(), make_point({-0.5, -0.5}), make_point({1.0, 0.7}), 0.8), {1.0, 2.0}, 10},
      {&lg, SingularDisk::chart_cube(lg.manifold()), {2.0}, 14}};
  for (const Run& r : runs) {
    const MetricShift m = metric_invariance(*r.f, r.phi, r.horizon, r.w);
    if (!(std::abs(m.shift()) <= 0.02)) out.fail(r.f->name() + ": shift " + std::to_string(m.shift()));
    ++out.cases;
  }
  return out;
}

inline Outcome determinism() {
  Outcome out;
  std::vector<ExperimentConfig> cs(3);
  cs[0].kind = "entropy";
  cs[0].system = {"cat", nlohmann::json::object()};
  cs[0].estimator.eps = {0.1, 0.05};
  cs[0].estimator.n_max = 6;
  cs[0].estimator.max_cloud = 1 << 14;
  cs[1].kind = "lyapunov";
  cs[1].system = {"coupled_quadratic", nlohmann::json::object()};
  cs[1].options = {{"n", 3000}, {"seeds", 3}};
  cs[1].seed = 17;
  cs[1].estimator.eps = {0.1, 0.05};
  cs[1].estimator.n_max = 5;
  cs[1].estimator.max_cloud = 1 << 12;
  cs[2].kind = "growth";
  cs[2].system = {"logistic", nlohmann::json::object()};
  cs[2].estimator.n_max = 8;
  cs[2].estimator.max_cloud = 1 << 14;
  for (ExperimentConfig& c : cs) {
    c.workers = 1;
    const std::string a = run_experiment(c, false).csv;
    c.workers = 2;
    const std::string b = run_experiment(c, false).csv;
    const std::string again = run_experiment(c, false).csv;
    if (a != b || b != again) out.fail(c.kind + ": CSV differs between runs");
    ++out.cases;
  }
  return out;
}

}  // namespace props
