#include <doctest.h>

#include <cmath>

#include "dimentropy/skewlab.hpp"
#include "dimentropy/systems.hpp"

using namespace dimentropy;

TEST_CASE("fiber map values") {
  const double a = 0.2;
  const FiberMaps m = build_fiber_maps(a);
  CHECK(m.f(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.f(0.0) == 0.0);
  CHECK(std::abs(m.f(1.0)) < 1e-14);
  CHECK(m.df(0.1) == doctest::Approx(2.4).epsilon(1e-14));
  const double x2 = 1.0 / (4.0 * (1.0 + a)), x3 = 1.0 / (8.0 * (1.0 + a) * (1.0 + a));
  CHECK(m.g(x2) == doctest::Approx(x3).epsilon(1e-14));
  const auto table = preimage_table(a, 6);
  CHECK(table[2] == doctest::Approx(x2));
  CHECK(table[3] == doctest::Approx(x3));
  for (int n = 1; n + 1 < 6; ++n) CHECK(m.f(table[static_cast<std::size_t>(n + 1)]) == doctest::Approx(table[static_cast<std::size_t>(n)]));
}

TEST_CASE("construction clauses") {
  std::vector<FiberCheck> checks;
  build_fiber_maps(0.2, &checks);
  CHECK_FALSE(checks.empty());
  for (const auto& c : checks) {
    CAPTURE(c.clause);
    CHECK(c.holds);
  }
  CHECK_THROWS_AS(build_fiber_maps(0.3), Error);
  CHECK_NOTHROW(build_fiber_maps(0.0));
}

TEST_CASE("inverses") {
  const FiberMaps m = build_fiber_maps(0.2);
  for (double y : {0.0, 0.1, 0.37, 0.8, 1.0}) CHECK(m.f(m.f_left_inverse(y)) == doctest::Approx(y).epsilon(1e-10));
  for (double y : {0.0, 0.1, 0.3, 0.49}) CHECK(m.g(m.g_inverse(y)) == doctest::Approx(y).epsilon(1e-10));
}

TEST_CASE("digit word and the base orbit") {
  SkewConfig c;
  const auto w = digit_word(c, c.word_length());
  REQUIRE(static_cast<int>(w.size()) == c.word_length());
  // 0 2 | 000 22 | 00000000 222222 ...
  const std::vector<std::uint8_t> head = {0, 2, 0, 0, 0, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 2, 2, 2, 2};
  for (std::size_t i = 0; i < head.size(); ++i) CHECK(w[i] == head[i]);
  CHECK(c.N(2) == 9);
  CHECK(c.t(2) == 21);
  CHECK_THROWS_AS(digit_word(c, 10 * c.word_length()), Error);

  const FiberMaps m = build_fiber_maps(c.alpha);
  for (double x : {0.5, 0.73, 0.9}) {
    const auto a = fiber_orbit(m, w, x, 20);
    const auto b = fiber_orbit_by_base(m, w, x, 20);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-6);
  }
}

TEST_CASE("lap multiset") {
  SkewConfig c;
  const FiberMaps m = build_fiber_maps(c.alpha);
  const auto w = digit_word(c, c.word_length());
  const auto hist = lap_history(m, w, c.N(2));
  // Branch multiplicity 2^(N_i / 3) at N_i, checked against runs on a grid.
  for (int i : {1, 2}) {
    const int N = c.N(i);
    CHECK(hist[static_cast<std::size_t>(N)].laps() == std::ldexp(1.0, N / 3));
    CHECK(grid_branch_count(m, w, N, std::size_t{1} << 20) == (std::uint64_t{1} << (N / 3)));
  }
  // Inside a g-block every image lies in [0, 1/2], so each step scales volume by 1 / (2 (1 + alpha)).
  const int start = 2 * c.n(1) + c.n(1) + c.n(2);  // first 2 of block two
  for (int t = start + 1; t < start + c.n(2); ++t) {
    const double ratio = hist[static_cast<std::size_t>(t + 1)].volume() / hist[static_cast<std::size_t>(t)].volume();
    CHECK(ratio == doctest::Approx(1.0 / (2.0 * (1.0 + c.alpha))));
  }
}

TEST_CASE("first two schedule points") {
  SkewConfig c;
  c.levels = 2;
  const SkewSeries s = run_schedule(c);
  REQUIRE(s.points.size() == 2);
  const SkewPoint& p = s.points[1];
  CHECK(p.t == 21);
  CHECK(p.laps_at_N == p.predicted_laps_at_N);
  CHECK(std::abs(p.log_vol_exact - p.predicted_log_vol) / std::abs(p.predicted_log_vol) < 1e-9);
  const SeparationReport r = verify_separation(s, 0.1);
  REQUIRE(r.rows.size() == 2);
  CHECK_FALSE(r.rows[0].checked);
  CHECK(r.rows[1].checked);
}
