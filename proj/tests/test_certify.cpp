#include <doctest.h>

#include <cmath>

#include "dimentropy/certify.hpp"

using namespace dimentropy;

namespace {

const double kCat = std::log((3.0 + std::sqrt(5.0)) / 2.0);

EntropyValue analytic(double h) { return {h, Provenance::Analytic, 0.0, ""}; }

}  // namespace

TEST_CASE("exterior power norms") {
  const SmoothMap t = build_system("toral", {{"matrix", {{2, 0}, {0, 3}}}});
  CHECK(lambda_k_norm(t, 0).value == 1.0);
  CHECK(lambda_k_norm(build_system("logistic"), 0).value == 1.0);
  CHECK(lambda_k_norm(t, 1).raw == doctest::Approx(3.0));
  CHECK(lambda_k_norm(t, 2).raw == doctest::Approx(6.0));
  // Affine maps need no inflation: the grid sup is exact.
  CHECK(lambda_k_norm(t, 1).value == doctest::Approx(3.0));

  // Uncoupled quadratic pair on [-1,1]^2: sup of max(|3.6 x|, |3.8 y|).
  const LambdaKNorm q = lambda_k_norm(build_system("coupled_quadratic", {{"eps", 0.0}}), 1);
  CHECK(q.raw == doctest::Approx(3.8));
  CHECK(q.value >= q.raw);
}

TEST_CASE("entropy-expanding certificates") {
  CHECK(certify_entropy_expanding(build_system("logistic"), analytic(std::log(2.0))).verdict == Verdict::Proved);
  const Certificate fe = certify_entropy_expanding(build_system("coupled_quadratic", {{"eps", 0.01}}), analytic(1.1));
  CHECK(fe.verdict == Verdict::Inconclusive);
  const SmoothMap t = build_system("toral", {{"matrix", {{2, 0}, {0, 3}}}});
  CHECK(certify_entropy_expanding(t, analytic(std::log(6.0))).verdict == Verdict::Proved);
}

TEST_CASE("entropy-hyperbolic certificates") {
  CHECK(certify_entropy_hyperbolic(build_system("cat"), analytic(kCat), 1, 1).verdict == Verdict::Proved);

  // Two cat blocks on T^4: no eigenvalue on the unit circle.
  const SmoothMap two = build_system("toral", {{"matrix", {{2, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 2, 1}, {0, 0, 1, 1}}}});
  CHECK(certify_entropy_hyperbolic(two, analytic(2 * kCat), 2, 2).verdict == Verdict::Proved);

  // A cat block next to a rotation-free identity block: eigenvalues 1 lie on
  // the circle, and the norm bound cannot close.
  const SmoothMap mixed = build_system("toral", {{"matrix", {{2, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}}});
  CHECK(certify_entropy_hyperbolic(mixed, analytic(kCat), 2, 2).verdict != Verdict::Proved);

  CHECK(certify_entropy_hyperbolic(build_system("identity"), analytic(0.0), 1, 1).verdict == Verdict::Inconclusive);
}

TEST_CASE("multiplicative periodic bound") {
  std::vector<int> ns;
  for (int n = 1; n <= 12; ++n) ns.push_back(n);
  const PeriodicBoundReport cat = periodic_bound_check(build_system("cat"), kCat, ns, BoundMode::Multiplicative);
  CHECK(cat.pass);
  // lambda^n + lambda^-n - 2 over lambda^n.
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double lam = std::exp(kCat);
    CHECK(cat.ratios[i] == doctest::Approx(1.0 + std::pow(lam, -2 * ns[i]) - 2 * std::pow(lam, -ns[i])));
  }
  CHECK(cat.ratios.back() == doctest::Approx(1.0).epsilon(1e-4));

  const PeriodicBoundReport lg = periodic_bound_check(build_system("logistic"), std::log(2.0), ns, BoundMode::Multiplicative);
  CHECK(lg.pass);
  for (double r : lg.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));

  const PeriodicBoundReport rot = periodic_bound_check(build_system("rotation"), 0.0, ns, BoundMode::Logarithmic);
  CHECK(rot.pass);
  CHECK(rot.zero_counts);
}
