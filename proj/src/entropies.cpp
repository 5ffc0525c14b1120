#include "dimentropy/entropies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dimentropy {

namespace {

RateEstimate zero_rate(const EntropySchedule& schedule) {
  RateEstimate r;
  for (int n = 1; n <= schedule.n_max; ++n) r.pairs.emplace_back(n, 0.0);
  r.n_lo = 1;
  r.n_hi = schedule.n_max;
  r.eps_schedule = schedule.eps;
  std::sort(r.eps_schedule.begin(), r.eps_schedule.end());
  r.eps = r.eps_schedule.empty() ? 0.0 : r.eps_schedule.front();
  for (double e : r.eps_schedule) r.per_eps.push_back(PerEpsSlope{e, 0.0, 1, schedule.n_max, 0.0, std::nullopt});
  return r;
}

int per_axis_cap(std::size_t max_cloud, int k) {
  if (k <= 1) return static_cast<int>(std::min<std::size_t>(max_cloud, 1u << 30));
  return std::max(2, static_cast<int>(std::floor(std::pow(static_cast<double>(max_cloud), 1.0 / k) + 1e-9)));
}

Point domain_center(const ManifoldModel& m) {
  Point c(m.dim());
  for (int a = 0; a < m.dim(); ++a) c(a) = 0.5 * (m.axis(a).lo + m.axis(a).hi);
  return c;
}

}  // namespace

DiskRate disk_entropy(const SmoothMap& f, const SingularDisk& phi, const EntropySchedule& schedule) {
  DiskRate out;
  out.label = phi.label();
  if (phi.k() == 0) {
    out.rate = zero_rate(schedule);
    out.cloud_size = 1;
    return out;
  }
  const double eps_min = *std::min_element(schedule.eps.begin(), schedule.eps.end());
  const int horizon = schedule.resolution_horizon > 0 ? schedule.resolution_horizon : schedule.n_max;
  const auto [res, capped] =
      cloud_gridres(phi, f, eps_min, horizon, schedule.resolution_c, per_axis_cap(schedule.max_cloud, phi.k()));
  out.resolution_capped = capped;
  const Cloud cloud = disk_cloud(phi, res);
  out.cloud_size = cloud.points.size();
  CoveringOptions covering = schedule.covering;
  covering.separated = false;
  const CoveringTable table = covering_table(f, cloud, schedule.eps, schedule.n_max, covering);
  out.greedy = table.greedy;
  try {
    out.rate = fit_rate(table.greedy, schedule.fit);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

DimensionalEntry dimensional_entropy(const SmoothMap& f, const DiskFamily& family, int k, const EntropySchedule& schedule) {
  if (k < 0 || k > f.dim()) throw Error("dimensional_entropy: k must lie in 0..d");
  DimensionalEntry e;
  e.k = k;
  e.family = family.name;
  e.non_compact = family.non_compact;
  const FamilyMembers members = enumerate(family);
  e.truncated = members.truncated;
  e.rejected_by_size = members.rejected_by_size;
  for (const SingularDisk& phi : members.members)
    if (phi.k() != k) throw Error("dimensional_entropy: family '" + family.name + "' has a member of dimension " + std::to_string(phi.k()));
  if (k == 0 || members.members.empty()) {
    e.uniform = zero_rate(schedule);
    for (const SingularDisk& phi : members.members) e.disks.push_back(disk_entropy(f, phi, schedule));
    return e;
  }

  for (const SingularDisk& phi : members.members) {
    DiskRate r = disk_entropy(f, phi, schedule);
    if (r.rate && (e.best_disk.empty() || r.rate->slope > e.h_lower)) {
      e.h_lower = r.rate->slope;
      e.best_disk = r.label;
    }
    if (!r.rate) e.saturated = true;
    e.disks.push_back(std::move(r));
  }

  // n -> max over members, kept only while every member is below its own guard.
  std::vector<CoveringSeries> maxima;
  for (std::size_t j = 0; j < schedule.eps.size(); ++j) {
    CoveringSeries s;
    s.eps = schedule.eps[j];
    s.sample = "family:" + family.name;
    std::size_t usable = std::numeric_limits<std::size_t>::max();
    bool cut = false;
    for (const DiskRate& d : e.disks) {
      const CoveringSeries& ds = d.greedy[j];
      const double guard = schedule.covering.saturation * static_cast<double>(ds.cloud_size);
      std::size_t ok = 0;
      while (ok < ds.counts.size() && static_cast<double>(ds.counts[ok]) < guard) ++ok;
      if (ok < ds.counts.size() || ds.saturated_at) cut = true;
      usable = std::min(usable, ok);
      s.cloud_size = std::max(s.cloud_size, ds.cloud_size);
    }
    for (std::size_t i = 0; i < usable; ++i) {
      std::size_t best = 0;
      for (const DiskRate& d : e.disks) best = std::max(best, d.greedy[j].counts[i]);
      s.horizons.push_back(static_cast<int>(i) + 1);
      s.counts.push_back(best);
    }
    if (cut) s.saturated_at = static_cast<int>(usable) + 1;
    maxima.push_back(std::move(s));
  }
  try {
    e.uniform = fit_rate(maxima, schedule.fit);
    e.H_lower = e.uniform->slope;
  } catch (const Error&) {
    e.saturated = true;
  }
  return e;
}

DiskFamily default_family(const SmoothMap& f, int k) {
  const ManifoldModel& m = f.manifold();
  const int d = m.dim();
  if (k < 0 || k > d) throw Error("default_family: k must lie in 0..d");
  DiskFamily fam;
  fam.name = "default-k" + std::to_string(k);
  const Point c = domain_center(m);
  if (k == 0) {
    fam.generators.push_back(SingularDisk::constant(m, 0, c));
    return fam;
  }
  if (k == d) {
    fam.generators.push_back(SingularDisk::chart_cube(m));
    return fam;
  }
  // Coordinate k-planes through the center.
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    Point base = c;
    Tangent a = Tangent::Zero(d, k);
    for (int i = 0; i < k; ++i) {
      const int ax = pick[static_cast<std::size_t>(i)];
      const double lo = m.axis(ax).lo, hi = m.axis(ax).hi;
      base(ax) = 0.5 * (lo + hi);
      a(ax, i) = 0.5 * (hi - lo);
    }
    std::string label = "plane";
    for (int ax : pick) label += "-x" + std::to_string(ax + 1);
    fam.generators.push_back(SingularDisk::affine(m, base, a, label));
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == d - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  // A generic direction, scaled so the image stays inside interval bounds.
  Tangent a(d, k);
  for (int r = 0; r < d; ++r)
    for (int col = 0; col < k; ++col) a(r, col) = std::fmod(std::sqrt(2.0 + r * 7 + col * 3) * (r + 1 + 2 * col), 1.0) + 0.2;
  for (int r = 0; r < d; ++r) {
    const double width = m.axis(r).hi - m.axis(r).lo;
    a.row(r) *= 0.45 * width / a.row(r).cwiseAbs().sum();
  }
  fam.generators.push_back(SingularDisk::affine(m, c, a, "generic"));
  return fam;
}

DimensionalEntropyProfile assemble_profile(std::vector<DimensionalEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const DimensionalEntry& a, const DimensionalEntry& b) { return a.k < b.k; });
  DimensionalEntropyProfile p;
  double h_prev = 0.0, H_prev = 0.0;
  for (const DimensionalEntry& e : entries) {
    std::string flag;
    double h = e.k == 0 ? 0.0 : e.h_lower, H = e.k == 0 ? 0.0 : e.H_lower;
    if (h < h_prev) {
      h = h_prev;
      flag += "h inherited from k-1;";
    }
    if (H < h) {
      H = h;
      flag += "H raised to h;";
    }
    if (H < H_prev) {
      H = H_prev;
      flag += "H inherited from k-1;";
    }
    if (e.truncated) flag += "enumeration truncated;";
    if (e.saturated) flag += "some windows saturated;";
    if (e.non_compact) flag += "non-compact family;";
    p.k_values.push_back(e.k);
    p.h_lower.push_back(h);
    p.H_lower.push_back(H);
    p.flags.push_back(flag);
    h_prev = h;
    H_prev = H;
  }
  p.entries = std::move(entries);
  return p;
}

DimensionalEntropyProfile build_profile(const SmoothMap& f, const std::vector<DiskFamily>& families,
                                        const EntropySchedule& schedule) {
  if (static_cast<int>(families.size()) != f.dim() + 1) throw Error("build_profile needs one family for each k = 0..d");
  std::vector<DimensionalEntry> entries;
  for (int k = 0; k <= f.dim(); ++k)
    entries.push_back(dimensional_entropy(f, families[static_cast<std::size_t>(k)], k, schedule));
  return assemble_profile(std::move(entries));
}

EntropyDimensions entropy_dimensions(const SmoothMap& f, const DimensionalEntropyProfile& profile,
                                     const std::optional<DimensionalEntropyProfile>& inverse_profile, double h_top_estimate,
                                     std::optional<double> tol_du) {
  EntropyDimensions out;
  out.d = f.dim();
  out.h_top = h_top_estimate;
  out.tol_du = tol_du ? *tol_du : 0.1 * std::max(h_top_estimate, 0.0);
  if (static_cast<int>(profile.H_lower.size()) != out.d + 1) throw Error("entropy_dimensions: profile must cover k = 0..d");
  const double threshold = h_top_estimate - out.tol_du;

  const auto dimension = [&](const DimensionalEntropyProfile& p, bool& ambiguous) {
    int du = out.d;
    bool reached = false;
    for (int k = 0; k <= out.d; ++k)
      if (p.H_lower[static_cast<std::size_t>(k)] >= threshold) {
        du = k;
        reached = true;
        break;
      }
    if (!reached) out.notes.push_back("H^d lower bound stays below h - tol; d reported");
    const double band = 0.5 * out.tol_du;
    for (int k = std::max(du - 1, 0); k <= du; ++k)
      if (std::abs(p.H_lower[static_cast<std::size_t>(k)] - threshold) < band) ambiguous = true;
    if (!reached) ambiguous = true;
    return du;
  };

  bool ambiguous = false;
  out.d_u = dimension(profile, ambiguous);
  if (!f.invertible()) {
    out.d_s = 0;
    out.d_s_status = "not invertible";
  } else if (inverse_profile) {
    if (static_cast<int>(inverse_profile->H_lower.size()) != out.d + 1)
      throw Error("entropy_dimensions: inverse profile must cover k = 0..d");
    out.d_s = dimension(*inverse_profile, ambiguous);
    out.d_s_status = "computed";
  } else {
    out.d_s_status = "not computed";
  }
  out.verdict = ambiguous ? DimensionVerdict::AmbiguousWithinTolerance : DimensionVerdict::Resolved;
  if (out.d_s && out.verdict == DimensionVerdict::Resolved && out.d_u + *out.d_s > out.d)
    out.notes.push_back("d_u + d_s exceeds d; estimator inconsistency");
  return out;
}

GapReport gap_experiment(const SmoothMap& f, const DiskFamily& family, int k, int r, const EntropySchedule& schedule,
                         double tolerance) {
  if (r < 1 || r == kInfiniteOrder) throw Error("gap_experiment needs a finite order r >= 1");
  const DimensionalEntry e = dimensional_entropy(f, family, k, schedule);
  GapReport g;
  g.k = k;
  g.r = r;
  g.h_lower = e.h_lower;
  g.H_lower = std::max(e.H_lower, e.h_lower);
  g.gap = g.H_lower - g.h_lower;
  g.allowance = static_cast<double>(k) / r * f.lip();
  g.tolerance = tolerance;
  g.within = g.H_lower <= g.h_lower + g.allowance + tolerance;
  g.non_compact = family.non_compact;
  g.witness = e.best_disk;
  if (g.non_compact) g.note = "non-compact family: outside the bounded-size hypothesis";
  else if (!g.within) g.note = "gap above allowance: family-enumeration artifact";
  return g;
}

DiskFamily unit_segment_family(const ManifoldModel& m, int directions, const Point& base) {
  DiskFamily fam;
  fam.name = "unit-segments-" + std::to_string(directions);
  for (int j = 0; j < directions; ++j) {
    const double th = std::numbers::pi * j / directions;
    fam.generators.push_back(SingularDisk::segment(m, base, make_point({std::cos(th), std::sin(th)}), 1.0));
  }
  return fam;
}

DiskFamily wrapped_segment_family(const ManifoldModel& m, const std::vector<double>& lengths, const Point& direction,
                                  const Point& base) {
  DiskFamily fam;
  fam.name = "wrapped-segments";
  fam.non_compact = true;
  for (double len : lengths) fam.generators.push_back(SingularDisk::segment(m, base, direction, len));
  return fam;
}

namespace {

SingularDisk vertical_fiber(const ManifoldModel& m, double x1) {
  Point base = Point::Constant(m.dim(), 0.5);
  base(0) = x1;
  Tangent a = Tangent::Zero(m.dim(), 1);
  a(1, 0) = 0.5;
  return SingularDisk::affine(m, base, a, "fiber-x1=" + std::to_string(x1));
}

}  // namespace

SemicontinuityReport semicontinuity_scan(const std::vector<double>& lambdas, const ScanOptions& options) {
  SemicontinuityReport out;
  out.dim = options.dim;
  out.sigma = options.sigma;
  for (double lambda : lambdas) {
    const SmoothMap f = build_system("f_lambda", {{"lambda", lambda}, {"dim", options.dim}, {"sigma", options.sigma}});
    ScanRow row;
    row.lambda = lambda;
    const int per_axis =
        options.cloud_per_axis > 0 ? options.cloud_per_axis : per_axis_cap(options.schedule.max_cloud, options.dim);
    // Closed grid, so the invariant face x1 = 1 is sampled.
    const Cloud cloud = disk_cloud(SingularDisk::chart_cube(f.manifold()), per_axis);
    const CoveringTable table = covering_table(f, cloud, options.schedule.eps, options.schedule.n_max, options.schedule.covering);
    try {
      row.rate = fit_rate(table.greedy, options.schedule.fit);
      row.cube_estimate = row.rate->slope;
    } catch (const Error& e) {
      row.error = e.what();
    }
    row.h_estimate = row.cube_estimate;
    for (double x1 : options.fibers) {
      const DiskRate r = disk_entropy(f, vertical_fiber(f.manifold(), x1), options.fiber_schedule);
      const double v = r.rate ? r.rate->slope : 0.0;
      row.fiber_estimates.emplace_back(x1, v);
      row.h_estimate = std::max(row.h_estimate, v);
    }
    out.rows.push_back(std::move(row));
  }
  const SmoothMap f0 = build_system("f_lambda", {{"lambda", 0.0}, {"dim", options.dim}, {"sigma", options.sigma}});
  const DiskRate fiber = disk_entropy(f0, vertical_fiber(f0.manifold(), 1.0), options.fiber_schedule);
  out.fiber_rate = fiber.rate;
  out.fiber_estimate = fiber.rate ? fiber.rate->slope : 0.0;
  return out;
}

SubdiskReport subdisk_probe(const SmoothMap& f, const SingularDisk& psi, const EntropySchedule& schedule, int pieces,
                            int volume_horizon) {
  if (psi.k() < 1) throw Error("subdisk_probe needs a disk of dimension >= 1");
  SubdiskReport out;
  out.horizon = volume_horizon;
  const DiskRate r = disk_entropy(f, psi, schedule);
  out.rate = r.rate;
  out.h_estimate = r.rate ? r.rate->slope : 0.0;
  std::vector<SingularDisk> subs{psi};
  if (pieces > 1)
    for (const SingularDisk& s : subdivide(psi, pieces)) subs.push_back(s);
  out.max_gamma = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const double g = volume_growth(f, subs[i], volume_horizon).gamma;
    const std::string name = i == 0 ? psi.label() : psi.label() + "/piece" + std::to_string(i - 1);
    out.gammas.emplace_back(name, g);
    if (g > out.max_gamma) {
      out.max_gamma = g;
      out.best_subdisk = name;
    }
  }
  return out;
}

nlohmann::json to_json(const RateEstimate& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const PerEpsSlope& p : r.per_eps)
    per.push_back({{"eps", p.eps},
                   {"slope", p.slope ? nlohmann::json(*p.slope) : nlohmann::json(nullptr)},
                   {"window", {p.n_lo, p.n_hi}},
                   {"residual", p.residual},
                   {"saturated_at", p.saturated_at ? nlohmann::json(*p.saturated_at) : nlohmann::json(nullptr)}});
  nlohmann::json pairs = nlohmann::json::array();
  for (auto [n, l] : r.pairs) pairs.push_back({n, l});
  return {{"slope", r.slope},     {"eps", r.eps},           {"window", {r.n_lo, r.n_hi}}, {"pairs", pairs},
          {"eps_schedule", r.eps_schedule}, {"per_eps", per}, {"residual", r.residual},
          {"monotone_in_eps", r.monotone_in_eps}};
}

nlohmann::json to_json(const DimensionalEntry& e) {
  nlohmann::json disks = nlohmann::json::array();
  for (const DiskRate& d : e.disks)
    disks.push_back({{"label", d.label},
                     {"rate", d.rate ? nlohmann::json(d.rate->slope) : nlohmann::json(nullptr)},
                     {"error", d.error},
                     {"cloud_size", d.cloud_size},
                     {"resolution_capped", d.resolution_capped}});
  return {{"k", e.k},
          {"h_lower", e.h_lower},
          {"H_lower", e.H_lower},
          {"family", e.family},
          {"disks", disks},
          {"uniform", e.uniform ? to_json(*e.uniform) : nlohmann::json(nullptr)},
          {"best_disk", e.best_disk},
          {"truncated", e.truncated},
          {"non_compact", e.non_compact},
          {"saturated", e.saturated},
          {"rejected_by_size", e.rejected_by_size},
          {"lower_bound", true}};
}

nlohmann::json to_json(const DimensionalEntropyProfile& p) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < p.k_values.size(); ++i)
    rows.push_back({{"k", p.k_values[i]}, {"h_lower", p.h_lower[i]}, {"H_lower", p.H_lower[i]}, {"flags", p.flags[i]}});
  nlohmann::json entries = nlohmann::json::array();
  for (const DimensionalEntry& e : p.entries) entries.push_back(to_json(e));
  return {{"profile", rows}, {"entries", entries}, {"lower_bounds", p.lower_bounds}};
}

nlohmann::json to_json(const EntropyDimensions& d) {
  return {{"d", d.d},
          {"d_u", d.d_u},
          {"d_s", d.d_s ? nlohmann::json(*d.d_s) : nlohmann::json("not computed")},
          {"d_s_status", d.d_s_status},
          {"h_top", d.h_top},
          {"tol_du", d.tol_du},
          {"verdict", d.verdict == DimensionVerdict::Resolved ? "resolved" : "ambiguous-within-tolerance"},
          {"notes", d.notes}};
}

nlohmann::json to_json(const GapReport& g) {
  return {{"k", g.k},           {"r", g.r},         {"h_lower", g.h_lower},     {"H_lower", g.H_lower},
          {"gap", g.gap},       {"allowance", g.allowance}, {"tolerance", g.tolerance}, {"within", g.within},
          {"non_compact", g.non_compact}, {"witness", g.witness}, {"note", g.note}};
}

nlohmann::json to_json(const SemicontinuityReport& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ScanRow& r : s.rows)
    rows.push_back({{"lambda", r.lambda},
                    {"h_estimate", r.h_estimate},
                    {"cube_estimate", r.cube_estimate},
                    {"fiber_estimates", r.fiber_estimates},
                    {"rate", r.rate ? to_json(*r.rate) : nlohmann::json(nullptr)},
                    {"error", r.error}});
  return {{"rows", rows},
          {"fiber_estimate", s.fiber_estimate},
          {"fiber_rate", s.fiber_rate ? to_json(*s.fiber_rate) : nlohmann::json(nullptr)},
          {"dim", s.dim},
          {"sigma", s.sigma}};
}

nlohmann::json to_json(const SubdiskReport& s) {
  nlohmann::json g = nlohmann::json::array();
  for (const auto& [name, v] : s.gammas) g.push_back({{"disk", name}, {"gamma", v}});
  return {{"h_estimate", s.h_estimate}, {"max_gamma", s.max_gamma}, {"best_subdisk", s.best_subdisk},
          {"gammas", g}, {"horizon", s.horizon}, {"rate", s.rate ? to_json(*s.rate) : nlohmann::json(nullptr)}};
}

}  // namespace dimentropy
