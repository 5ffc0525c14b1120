#include <doctest.h>

#include <cmath>

#include "dimentropy/entropies.hpp"

using namespace dimentropy;

namespace {

EntropySchedule quick(std::size_t cloud = std::size_t{1} << 16, int n_max = 10) {
  EntropySchedule s;
  s.eps = {0.1, 0.05};
  s.n_max = n_max;
  s.max_cloud = cloud;
  return s;
}

const SmoothMap& diag23() {
  static const SmoothMap t = build_system("toral", {{"matrix", {{2, 0}, {0, 3}}}});
  return t;
}

std::vector<DiskFamily> defaults(const SmoothMap& f) {
  std::vector<DiskFamily> out;
  for (int k = 0; k <= f.dim(); ++k) out.push_back(default_family(f, k));
  return out;
}

}  // namespace

TEST_CASE("identity has zero dimensional entropies") {
  const SmoothMap id = build_system("identity");
  const DimensionalEntropyProfile p = build_profile(id, defaults(id), quick(4096, 6));
  for (std::size_t i = 0; i < p.k_values.size(); ++i) {
    CHECK(std::abs(p.h_lower[i]) < 1e-9);
    CHECK(std::abs(p.H_lower[i]) < 1e-9);
  }
  const EntropyDimensions d = entropy_dimensions(id, p, std::nullopt, 0.0);
  CHECK(d.d_u == 0);
  const GapReport g = gap_experiment(id, default_family(id, 1), 1, 2, quick(4096, 6));
  CHECK(g.gap <= 1e-9);
}

TEST_CASE("generic unit segments of diag(2,3) grow at log 3") {
  const DimensionalEntry e =
      dimensional_entropy(diag23(), unit_segment_family(diag23().manifold(), 4, make_point({0.1, 0.2})), 1, quick(1 << 17, 9));
  CHECK(e.h_lower == doctest::Approx(std::log(3.0)).epsilon(0.12));
  CHECK(e.best_disk.find("segment") != std::string::npos);
}

TEST_CASE("unbounded-length segments are flagged as a non-compact family") {
  const double s = (std::sqrt(5.0) - 1.0) / 2.0;
  const DiskFamily fam = wrapped_segment_family(diag23().manifold(), {1.0, 16.0}, make_point({1.0, s}), make_point({0.1, 0.2}));
  CHECK(fam.non_compact);
  const GapReport g = gap_experiment(diag23(), fam, 1, 2, quick(1 << 17, 5), 0.1);
  CHECK(g.non_compact);
  CHECK(g.H_lower >= g.h_lower - 1e-12);
}

TEST_CASE("cat map is entropy-hyperbolic") {
  const SmoothMap cat = build_system("cat");
  const double h = std::log((3.0 + std::sqrt(5.0)) / 2.0);
  const EntropySchedule s = quick(1 << 15, 8);
  const DimensionalEntropyProfile p = build_profile(cat, defaults(cat), s);
  const DimensionalEntropyProfile q = build_profile(cat.inverse(), defaults(cat.inverse()), s);
  const EntropyDimensions d = entropy_dimensions(cat, p, q, h);
  CHECK(d.d_u == 1);
  REQUIRE(d.d_s.has_value());
  CHECK(*d.d_s == 1);
  CHECK(d.d_u + *d.d_s == 2);
}

TEST_CASE("sub-disk volume growth matches the entropy of a generic segment") {
  const SingularDisk seg =
      SingularDisk::segment(diag23().manifold(), make_point({0.1, 0.2}), make_point({1.0, std::sqrt(2.0)}), 1.0);
  const SubdiskReport r = subdisk_probe(diag23(), seg, quick(1 << 17, 9), 4, 10);
  CHECK(r.h_estimate == doctest::Approx(std::log(3.0)).epsilon(0.12));
  CHECK(r.max_gamma == doctest::Approx(std::log(3.0)).epsilon(0.05));
}

TEST_CASE("profile assembly takes running maxima") {
  std::vector<DimensionalEntry> es(3);
  for (int k = 0; k < 3; ++k) es[static_cast<std::size_t>(k)].k = k;
  es[1].h_lower = 0.5;
  es[1].H_lower = 0.4;
  es[2].h_lower = 0.3;
  es[2].H_lower = 0.7;
  const DimensionalEntropyProfile p = assemble_profile(es);
  CHECK(p.h_lower[2] == doctest::Approx(0.5));
  CHECK(p.H_lower[1] == doctest::Approx(0.5));
  CHECK(p.H_lower[2] == doctest::Approx(0.7));
  CHECK(p.h_lower[0] == 0.0);
}
