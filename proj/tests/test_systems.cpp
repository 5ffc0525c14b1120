#include <doctest.h>

#include <cmath>

#include "dimentropy/systems.hpp"

using namespace dimentropy;

namespace {

const double kPi = std::acos(-1.0);

// Roots of f^n(x) - x on [0, 1] for n = 1..n_max: x = 0 plus sign changes on a
// Chebyshev-spaced grid of (0, 1]. Roots crowd at the endpoints (pairs ~1e-9
// apart near x = 0 at n = 12), which a uniform grid cannot separate.
std::vector<std::uint64_t> logistic_fixed_points_by_sign_changes(int n_max, int grid) {
  std::vector<std::uint64_t> roots(static_cast<std::size_t>(n_max + 1), 1);
  std::vector<char> prev(static_cast<std::size_t>(n_max + 1), 0);
  for (int j = 1; j <= grid; ++j) {
    const double x = 0.5 * (1.0 - std::cos(kPi * j / grid));
    double y = x;
    for (int n = 1; n <= n_max; ++n) {
      y = 4.0 * y * (1.0 - y);
      const char s = y - x > 0;
      if (j > 1 && s != prev[static_cast<std::size_t>(n)]) ++roots[static_cast<std::size_t>(n)];
      prev[static_cast<std::size_t>(n)] = s;
    }
  }
  return roots;
}

}  // namespace

TEST_CASE("catalog evaluations") {
  const SmoothMap logistic = build_system("logistic");
  CHECK(logistic(make_point({0.5}))(0) == doctest::Approx(1.0));
  CHECK(logistic(make_point({1.0}))(0) == doctest::Approx(0.0));

  const SmoothMap t = build_system("toral", {{"matrix", {{2, 0}, {0, 3}}}});
  const Point y = t(make_point({0.7, 0.4}));
  CHECK(y(0) == doctest::Approx(0.4));
  CHECK(y(1) == doctest::Approx(0.2));

  const SmoothMap q = build_system("coupled_quadratic", {{"eps", 0.01}});
  const Point z = q(make_point({0.0, 0.0}));
  CHECK(z(0) == doctest::Approx(1.0));
  CHECK(z(1) == doctest::Approx(1.0));
}

TEST_CASE("catalog rejects bad parameters") {
  CHECK_THROWS_AS(build_system("no_such_map"), Error);
  CHECK_THROWS_AS(build_system("toral", {{"matrix", {{1, 0}, {0, 0}}}}), Error);
  CHECK_THROWS_AS(build_system("coupled_quadratic", {{"eps", -0.01}}), Error);
}

TEST_CASE("orbits") {
  const SmoothMap id = build_system("identity");
  const Point x = make_point({0.3, 0.8});
  for (const Point& p : iterate(id, x, 5)) CHECK((p - x).norm() == 0.0);

  const auto orbit = iterate(build_system("logistic"), make_point({0.5}), 2);
  REQUIRE(orbit.size() == 3);
  CHECK(orbit[0](0) == 0.5);
  CHECK(orbit[1](0) == doctest::Approx(1.0));
  CHECK(orbit[2](0) == doctest::Approx(0.0));

  for (const Point& p : iterate(build_system("cat"), make_point({0.0, 0.0}), 3)) CHECK(p.norm() == 0.0);
}

TEST_CASE("periodic counts against independent oracles") {
  const SmoothMap logistic = build_system("logistic");
  CHECK(count_periodic(logistic, 3) == 8);
  const auto oracles = logistic_fixed_points_by_sign_changes(12, 1 << 26);
  for (int n = 1; n <= 12; ++n) {
    CAPTURE(n);
    const std::uint64_t oracle = oracles[static_cast<std::size_t>(n)];
    CHECK(oracle == (std::uint64_t{1} << n));
    CHECK(count_periodic(logistic, n) == oracle);
  }

  // Cat map: |det(T^n - I)| = lambda^n + lambda^-n - 2 (Lucas numbers minus 2).
  const SmoothMap cat = build_system("cat");
  CHECK(count_periodic(cat, 1) == 1);
  const double lam = (3.0 + std::sqrt(5.0)) / 2.0;
  for (int n = 1; n <= 12; ++n) {
    CAPTURE(n);
    CHECK(static_cast<double>(count_periodic(cat, n)) == doctest::Approx(std::pow(lam, n) + std::pow(lam, -n) - 2.0));
  }

  CHECK(count_periodic(build_system("rotation"), 7) == 0);
}

TEST_CASE("toral entropy and integer helpers") {
  IntMatrix a(2, 2);
  a << 2, 1, 1, 1;
  CHECK(integer_determinant(a) == 1);
  CHECK(toral_entropy(a) == doctest::Approx(std::log((3.0 + std::sqrt(5.0)) / 2.0)));
  IntMatrix d(2, 2);
  d << 2, 0, 0, 3;
  CHECK(toral_entropy(d) == doctest::Approx(std::log(6.0)));
  CHECK(integer_power(d, 3)(1, 1) == 27);
}

TEST_CASE("manifold metric") {
  const ManifoldModel t = ManifoldModel::torus(2);
  CHECK(t.distance(make_point({0.05, 0.5}), make_point({0.95, 0.5})) == doctest::Approx(0.1));
  const ManifoldModel c = ManifoldModel::cube(1, 0.0, 1.0);
  CHECK(c.distance(make_point({0.05}), make_point({0.95})) == doctest::Approx(0.9));
  CHECK(t.canonical(make_point({1.25, -0.25}))(0) == doctest::Approx(0.25));
  CHECK(t.canonical(make_point({1.25, -0.25}))(1) == doctest::Approx(0.75));
}

TEST_CASE("inverse and jacobian of the cat map") {
  const SmoothMap cat = build_system("cat");
  REQUIRE(cat.invertible());
  const Point x = make_point({0.31, 0.77});
  const Point back = cat.inverse()(cat(x));
  CHECK(cat.manifold().distance(back, x) < 1e-12);
  const Jacobian j = cat.jacobian(x);
  CHECK(j(0, 0) == 2.0);
  CHECK(j(0, 1) == 1.0);
}
