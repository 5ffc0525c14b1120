#include <doctest.h>

#include <cmath>

#include "dimentropy/lyapunov.hpp"

using namespace dimentropy;

namespace {

const double kCat = std::log((3.0 + std::sqrt(5.0)) / 2.0);

// Orbit mean of log|f'| for the logistic map, written out independently.
double logistic_exponent(double x, int n, int transient) {
  for (int i = 0; i < transient; ++i) x = 4 * x * (1 - x);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    s += std::log(std::max(std::abs(4.0 - 8.0 * x), 1e-300));
    x = 4 * x * (1 - x);
  }
  return s / n;
}

}  // namespace

TEST_CASE("exponents of the catalog") {
  const LyapunovSpectrum id = lyapunov_spectrum(build_system("identity"), make_point({0.2, 0.3}), 1000, 10);
  for (double e : id.exponents) CHECK(std::abs(e) < 1e-12);

  const LyapunovSpectrum cat = lyapunov_spectrum(build_system("cat"), make_point({0.1234, 0.5678}), 10000, 100);
  REQUIRE(cat.exponents.size() == 2);
  CHECK(cat.exponents[0] == doctest::Approx(kCat).epsilon(1e-3));
  CHECK(cat.exponents[1] == doctest::Approx(-kCat).epsilon(1e-3));

  const SmoothMap logistic = build_system("logistic");
  const Point x0 = random_point(logistic.manifold(), 3);
  const LyapunovSpectrum l = lyapunov_spectrum(logistic, x0, 100000, 100);
  CHECK(l.exponents[0] == doctest::Approx(std::log(2.0)).epsilon(0.01 / std::log(2.0)));
  // Floating-point orbits of the logistic map are chaotic, so agreement with
  // the hand-written average is only statistical.
  CHECK(std::abs(l.exponents[0] - logistic_exponent(x0(0), 100000, 100)) < 0.02);
}

TEST_CASE("QR telescoping") {
  for (const char* name : {"cat", "coupled_quadratic", "f_lambda"}) {
    CAPTURE(name);
    const SmoothMap f = build_system(name);
    const LyapunovSpectrum s = lyapunov_spectrum(f, random_point(f.manifold(), 11), 5000, 50);
    if (s.singular_hits == 0) CHECK(std::abs(s.sum() - s.log_det_average) < 1e-6);
  }
}

TEST_CASE("seed runs are deterministic") {
  const SmoothMap f = build_system("coupled_quadratic");
  const auto a = seed_runs(f, 3, 42, 2000, 20, 1);
  const auto b = seed_runs(f, 3, 42, 2000, 20, 2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].exponents == b[i].exponents);
}

TEST_CASE("Ruelle checks") {
  const LyapunovSpectrum id = lyapunov_spectrum(build_system("identity"), make_point({0.2, 0.3}), 100, 0);
  const MarginReport r0 = ruelle_check({0.0, Provenance::Analytic, 0.02, ""}, id);
  CHECK(r0.margin == doctest::Approx(0.0));
  CHECK(r0.pass);

  const SmoothMap logistic = build_system("logistic");
  const LyapunovSpectrum l = lyapunov_spectrum(logistic, random_point(logistic.manifold(), 5), 100000, 100);
  const MarginReport rl = ruelle_check({std::log(2.0), Provenance::Analytic, 0.02, ""}, l);
  CHECK(std::abs(rl.margin) < 0.02);
  CHECK(rl.pass);

  const LyapunovSpectrum cat = lyapunov_spectrum(build_system("cat"), make_point({0.3, 0.1}), 10000, 100);
  const EntropyValue hc{kCat, Provenance::Analytic, 0.02, ""};
  const MarginReport rc = ruelle_check(hc, cat);
  CHECK(std::abs(rc.margin) < 1e-3);
  CHECK(rc.pass);
  const MarginReport rn0 = ruelle_newhouse_check(hc, UpperBound{0.0, "analytic"}, cat, 0);
  CHECK(rn0.margin == doctest::Approx(rc.margin));

  const SmoothMap t = build_system("toral", {{"matrix", {{2, 0}, {0, 3}}}});
  const LyapunovSpectrum ts = lyapunov_spectrum(t, make_point({0.3, 0.1}), 1000, 10);
  const MarginReport rn = ruelle_newhouse_check({std::log(6.0), Provenance::Analytic, 0.02, ""},
                                                UpperBound{std::log(3.0), "analytic"}, ts, 1);
  CHECK(std::abs(rn.margin) < 1e-6);
  CHECK(rn.pass);

  const MarginReport none = ruelle_newhouse_check(hc, std::nullopt, cat, 1);
  CHECK(none.status == "no valid upper bound");
}
