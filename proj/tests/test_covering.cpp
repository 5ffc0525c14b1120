#include <doctest.h>

#include <cmath>
#include <random>

#include "dimentropy/covering.hpp"

using namespace dimentropy;

namespace {

CoveringSeries series(double eps, const std::vector<std::size_t>& counts, std::size_t cloud = 1u << 30) {
  CoveringSeries s;
  s.eps = eps;
  s.cloud_size = cloud;
  for (std::size_t n = 0; n < counts.size(); ++n) s.horizons.push_back(static_cast<int>(n + 1));
  s.counts = counts;
  return s;
}

}  // namespace

TEST_CASE("dynamic distance") {
  const SmoothMap id = build_system("identity");
  const Point x = make_point({0.1, 0.9}), y = make_point({0.3, 0.2});
  for (int n : {1, 5, 20}) CHECK(dynamic_distance(id, x, y, n) == doctest::Approx(id.manifold().distance(x, y)));

  const SmoothMap t = build_system("toral", {{"matrix", {{2, 0}, {0, 3}}}});
  // Direct orbit: the second coordinates differ by 3^k * 0.001 for k < 4.
  double oracle = 0.0;
  double a = 0.0, b = 0.001;
  for (int k = 0; k < 4; ++k) {
    const double d = std::abs(a - b);
    oracle = std::max(oracle, std::min(d, 1.0 - d));
    a = std::fmod(3 * a, 1.0);
    b = std::fmod(3 * b, 1.0);
  }
  CHECK(oracle == doctest::Approx(0.027));
  CHECK(dynamic_distance(t, make_point({0, 0}), make_point({0, 0.001}), 4) == doctest::Approx(oracle));

  const SmoothMap logistic = build_system("logistic");
  CHECK(dynamic_distance(logistic, make_point({0.3}), make_point({0.3}), 10) == 0.0);
}

TEST_CASE("greedy cover of a small cloud") {
  const SmoothMap id = build_system("identity");
  Cloud c{id.manifold(), {}, "ball"};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.4, 0.45);
  for (int i = 0; i < 100; ++i) c.points.push_back(make_point({u(rng), u(rng)}));
  for (int n : {1, 4}) CHECK(covering_number(id, c, 0.1, n).count == 1);
}

TEST_CASE("greedy centers form an eps-net and an eps-separated set") {
  const SmoothMap f = build_system("cat");
  const Cloud c = manifold_cloud(f.manifold(), 40);
  const int n = 3;
  const double eps = 0.1;
  const OrbitTable orbits = compute_orbits(f, c, n);
  const auto centers = greedy_centers(orbits, eps, n);
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      CHECK(dynamic_distance(f, c.points[centers[i]], c.points[centers[j]], n) >= eps - 1e-6);
  for (const Point& p : c.points) {
    double best = 1e9;
    for (auto k : centers) best = std::min(best, dynamic_distance(f, p, c.points[k], n));
    CHECK(best < eps + 1e-6);
  }
}

TEST_CASE("fit_rate on synthetic counts") {
  const RateEstimate flat = fit_rate({series(0.1, std::vector<std::size_t>(10, 5)), series(0.05, std::vector<std::size_t>(10, 5))});
  CHECK(std::abs(flat.slope) < 1e-12);
  std::vector<std::size_t> pow2;
  for (int n = 1; n <= 10; ++n) pow2.push_back(std::size_t{1} << n);
  CHECK(fit_rate({series(0.1, pow2), series(0.05, pow2)}).slope == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // Saturated horizons are excluded from the window.
  const RateEstimate sat = fit_rate({series(0.1, pow2, 1200), series(0.05, pow2, 1200)});
  CHECK(sat.n_hi <= 9);
}

TEST_CASE("linear stretching on a unit segment: rate log 2") {
  const SmoothMap t = build_system("toral", {{"matrix", {{2, 0}, {0, 3}}}});
  const SingularDisk seg = SingularDisk::segment(t.manifold(), make_point({0.1, 0.2}), make_point({1.0, 0.0}), 1.0);
  const Cloud c = disk_cloud(seg, 100000);
  const CoveringTable tab = covering_table(t, c, {0.1, 0.05}, 10);
  const auto& s = tab.greedy.back();
  // Box-crossing count: the n-th iterate of the x-coordinate wraps 2^(n-1) times,
  // so the count is of order 2^(n-1) / eps.
  for (std::size_t i = 0; i < s.counts.size(); ++i) {
    const double predicted = std::pow(2.0, s.horizons[i] - 1) / 0.05;
    CHECK(static_cast<double>(s.counts[i]) >= 0.4 * predicted);
    CHECK(static_cast<double>(s.counts[i]) <= 1.6 * predicted);
  }
  CHECK(fit_rate(tab.greedy).slope == doctest::Approx(std::log(2.0)).epsilon(0.05));
}

TEST_CASE("logistic full-interval rate") {
  const SmoothMap f = build_system("logistic");
  const Cloud c = disk_cloud(SingularDisk::chart_cube(f.manifold()), 200000);
  const CoveringTable tab = covering_table(f, c, {0.05, 0.02}, 16);
  const double slope = fit_rate(tab.greedy).slope;
  CHECK(slope >= 0.66);
  CHECK(slope <= 0.72);
}

TEST_CASE("separated counts bound greedy counts") {
  const SmoothMap f = build_system("logistic");
  const Cloud c = disk_cloud(SingularDisk::chart_cube(f.manifold()), 20000);
  const CoveringTable tab = covering_table(f, c, {0.1, 0.05}, 8);
  for (std::size_t e = 0; e < tab.greedy.size(); ++e)
    for (std::size_t i = 0; i < tab.greedy[e].counts.size(); ++i) {
      CHECK(tab.separated[e].counts[i] <= tab.greedy[e].counts[i]);
      if (i > 0) CHECK(tab.greedy[e].counts[i] >= tab.greedy[e].counts[i - 1]);
    }
}
