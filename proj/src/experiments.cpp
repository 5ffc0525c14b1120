#include "dimentropy/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dimentropy/certify.hpp"
#include "dimentropy/covering.hpp"
#include "dimentropy/growth.hpp"
#include "dimentropy/parallel.hpp"
#include "dimentropy/resolution.hpp"
#include "dimentropy/skewlab.hpp"

namespace dimentropy {

using nlohmann::json;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <class T>
T opt(const json& o, const std::string& key, T fallback) {
  return o.contains(key) ? o.at(key).get<T>() : fallback;
}

Point to_point(const std::vector<double>& v) {
  Point p(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) p(static_cast<int>(i)) = v[i];
  return p;
}

Point center_of(const ManifoldModel& m) {
  Point c(m.dim());
  for (int a = 0; a < m.dim(); ++a) c(a) = 0.5 * (m.axis(a).lo + m.axis(a).hi);
  return c;
}

// Rows of comma-separated cells.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
  std::string str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << "\n";
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << "\n";
    }
    return os.str();
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

int default_k(const ExperimentConfig& c, const SmoothMap& f) { return c.estimator.k >= 0 ? c.estimator.k : f.dim(); }

std::string preset_description(const std::string& name) {
  if (name == "torus-gap")
    return "torus gap: T = diag(2,3) on T^2, fixed unit segments (log 3) vs wrapped segments of growing length (log 6)";
  if (name == "skewlab-default")
    return "skew-product separation: covering growth of the fiber curve vs its length at t_1..t_3, alpha = 0.2, n_i = i!";
  if (name == "flambda-scan") return "semicontinuity scan: h_top(F_lambda) against lambda, with the invariant fiber {1} x [0,1]";
  return "";
}

}  // namespace

DiskFamily make_family(const SmoothMap& f, const FamilySpec& spec, int k) {
  const ManifoldModel& m = f.manifold();
  const json& p = spec.params;
  if (spec.kind == "default") return default_family(f, k);
  DiskFamily fam;
  fam.name = spec.kind;
  if (spec.kind == "chart-cube") {
    if (k != f.dim()) throw Error("family chart-cube has dimension d = " + std::to_string(f.dim()));
    fam.generators.push_back(SingularDisk::chart_cube(m));
    return fam;
  }
  if (spec.kind == "point") {
    const Point x = p.contains("point") ? to_point(p.at("point").get<std::vector<double>>()) : center_of(m);
    fam.generators.push_back(SingularDisk::constant(m, 0, x));
    return fam;
  }
  if (spec.kind == "unit-segments" || spec.kind == "wrapped-segments") {
    if (m.dim() != 2) throw Error("segment families need a 2-dimensional manifold");
    const Point base = to_point(opt<std::vector<double>>(p, "base", {0.1, 0.2}));
    if (spec.kind == "unit-segments") return unit_segment_family(m, opt<int>(p, "directions", 8), base);
    const double s = (std::sqrt(5.0) - 1.0) / 2.0;
    const Point dir = to_point(opt<std::vector<double>>(p, "direction", {1.0, s}));
    return wrapped_segment_family(m, opt<std::vector<double>>(p, "lengths", {64.0, 256.0, 1024.0}), dir, base);
  }
  if (spec.kind == "fiber") {
    if (m.dim() < 2) throw Error("fiber family needs dimension >= 2");
    for (double x1 : opt<std::vector<double>>(p, "x1", {1.0})) {
      Point base = center_of(m);
      base(0) = x1;
      Tangent a = Tangent::Zero(m.dim(), 1);
      a(1, 0) = 0.5 * (m.axis(1).hi - m.axis(1).lo);
      fam.generators.push_back(SingularDisk::affine(m, base, a, "fiber-x1=" + num(x1)));
    }
    return fam;
  }
  if (spec.kind == "affine") {
    if (!p.contains("disks")) throw Error("family affine needs 'disks': [{base, tangent}]");
    for (const json& d : p.at("disks")) {
      const Point base = to_point(d.at("base").get<std::vector<double>>());
      const auto rows = d.at("tangent").get<std::vector<std::vector<double>>>();
      if (static_cast<int>(rows.size()) != m.dim()) throw Error("affine tangent needs one row per manifold axis");
      const int kk = rows.empty() ? 0 : static_cast<int>(rows.front().size());
      Tangent a(m.dim(), kk);
      for (int r = 0; r < m.dim(); ++r)
        for (int c = 0; c < kk; ++c) a(r, c) = rows[static_cast<std::size_t>(r)].at(static_cast<std::size_t>(c));
      fam.generators.push_back(SingularDisk::affine(m, base, a, d.value("label", "affine")));
    }
    return fam;
  }
  throw Error("unknown family kind '" + spec.kind + "'");
}

EntropySchedule make_schedule(const ExperimentConfig& c) {
  EntropySchedule s;
  s.eps = c.estimator.eps;
  s.n_max = c.estimator.n_max;
  s.max_cloud = static_cast<std::size_t>(c.estimator.max_cloud);
  s.covering.budget_bytes = static_cast<std::size_t>(c.budget_mb) << 20;
  s.covering.workers = c.workers;
  return s;
}

EntropyValue reference_entropy(const SmoothMap& f, const EntropySchedule& schedule) {
  const double log2 = std::log(2.0);
  switch (f.family()) {
    case Family::Identity:
    case Family::Rotation: return {0.0, Provenance::Analytic, 0.02, "isometry"};
    case Family::Logistic: return {log2, Provenance::Analytic, 0.02, "two full laps"};
    case Family::Toral: return {toral_entropy(*f.integer_matrix()), Provenance::Analytic, 0.02, "sum of log|eigenvalue|^+"};
    case Family::CircleLogisticProduct: return {std::log(4.0) + log2, Provenance::Analytic, 0.02, "product"};
    case Family::Quadratic:
      if (f.params().value("a", 2.0) == 2.0) return {log2, Provenance::Analytic, 0.02, "a = 2, two full laps"};
      break;
    case Family::FLambda: {
      const double h = f.params().value("h", 1.0);
      if (h == 1.0) return {log2, Provenance::Analytic, 0.02, "lambda = 0: logistic fiber over a fixed face"};
      return {0.0, Provenance::Analytic, 0.02, "h(lambda) < 1: orbits collapse onto x1 = 0"};
    }
    default: break;
  }
  const DiskRate r = disk_entropy(f, SingularDisk::chart_cube(f.manifold()), schedule);
  return {r.rate ? r.rate->slope : 0.0, Provenance::CoveringEstimate, 0.05, "chart-cube covering estimate"};
}

std::optional<UpperBound> analytic_hk_upper(const SmoothMap& f, int k) {
  if (k == 0) return UpperBound{0.0, "analytic"};
  if (f.family() == Family::Identity || f.family() == Family::Rotation) return UpperBound{0.0, "analytic"};
  if (f.family() != Family::Toral || !f.integer_matrix()) return std::nullopt;
  const IntMatrix& a = *f.integer_matrix();
  Eigen::MatrixXd m = a.cast<double>();
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  std::vector<double> logs;
  for (int i = 0; i < m.rows(); ++i) logs.push_back(std::max(0.0, std::log(std::abs(es.eigenvalues()(i)))));
  std::sort(logs.rbegin(), logs.rend());
  double s = 0.0;
  for (int i = 0; i < k && i < static_cast<int>(logs.size()); ++i) s += logs[static_cast<std::size_t>(i)];
  return UpperBound{s, "analytic: k largest log|eigenvalue|^+"};
}

TorusGapReport torus_gap(const TorusGapOptions& o) {
  const SmoothMap f = build_system("toral", {{"matrix", {{2, 0}, {0, 3}}}});
  TorusGapReport r;
  r.log3 = std::log(3.0);
  r.log6 = std::log(6.0);
  EntropySchedule unit;
  unit.eps = o.eps;
  unit.n_max = o.unit_n_max;
  unit.max_cloud = o.unit_cloud;
  r.unit = dimensional_entropy(f, unit_segment_family(f.manifold(), o.directions, make_point({0.1, 0.2})), 1, unit);
  EntropySchedule wrapped = unit;
  wrapped.n_max = o.wrapped_n_max;
  wrapped.max_cloud = o.wrapped_cloud;
  const double s = (std::sqrt(5.0) - 1.0) / 2.0;
  r.wrapped = dimensional_entropy(
      f, wrapped_segment_family(f.manifold(), o.lengths, make_point({1.0, s}), make_point({0.1, 0.2})), 1, wrapped);
  return r;
}

namespace {

struct Output {
  Table table;
  json result;
  bool partial = false;
};

Output run_entropy(const ExperimentConfig& c) {
  const SmoothMap f = build_system(c.system.name, c.system.params);
  const EntropySchedule sched = make_schedule(c);
  if (c.options.contains("torus_gap")) {
    const json& o = c.options.at("torus_gap");
    TorusGapOptions t;
    t.directions = opt<int>(o, "directions", t.directions);
    t.lengths = opt<std::vector<double>>(o, "lengths", t.lengths);
    t.eps = c.estimator.eps;
    t.unit_n_max = opt<int>(o, "unit_n_max", t.unit_n_max);
    t.wrapped_n_max = opt<int>(o, "wrapped_n_max", t.wrapped_n_max);
    t.unit_cloud = opt<std::size_t>(o, "unit_cloud", t.unit_cloud);
    t.wrapped_cloud = opt<std::size_t>(o, "wrapped_cloud", t.wrapped_cloud);
    const TorusGapReport g = torus_gap(t);
    Output out{Table({"family", "estimate", "value", "reference", "reference_value", "best_disk"}), json::object()};
    out.table.row({g.unit.family, "h_lower", num(g.unit.h_lower), "log 3", num(g.log3), g.unit.best_disk});
    out.table.row({g.unit.family, "H_lower", num(g.unit.H_lower), "log 3", num(g.log3), ""});
    out.table.row({g.wrapped.family, "h_lower", num(g.wrapped.h_lower), "log 6", num(g.log6), g.wrapped.best_disk});
    out.table.row({g.wrapped.family, "H_lower", num(g.wrapped.H_lower), "log 6", num(g.log6), ""});
    out.result = {{"unit", to_json(g.unit)}, {"wrapped", to_json(g.wrapped)}, {"log3", g.log3}, {"log6", g.log6}};
    return out;
  }
  const int k = default_k(c, f);
  const DiskFamily fam = make_family(f, c.family, k);
  const FamilyMembers members = enumerate(fam);
  Output out{Table({"disk", "eps", "n", "count", "cloud_size"}), json::object()};
  json disks = json::array();
  for (const SingularDisk& phi : members.members) {
    const DiskRate r = disk_entropy(f, phi, sched);
    for (const CoveringSeries& s : r.greedy)
      for (std::size_t i = 0; i < s.counts.size(); ++i)
        out.table.row({r.label, num(s.eps), std::to_string(s.horizons[i]), std::to_string(s.counts[i]), std::to_string(s.cloud_size)});
    disks.push_back({{"disk", r.label},
                     {"rate", r.rate ? to_json(*r.rate) : json(nullptr)},
                     {"error", r.error},
                     {"cloud_size", r.cloud_size},
                     {"resolution_capped", r.resolution_capped}});
    out.partial = out.partial || !r.rate;
  }
  out.result = {{"k", k}, {"family", fam.name}, {"disks", disks}, {"truncated", members.truncated}};
  return out;
}

Output run_dimensional(const ExperimentConfig& c) {
  const SmoothMap f = build_system(c.system.name, c.system.params);
  const EntropySchedule sched = make_schedule(c);
  std::vector<DiskFamily> families;
  for (int k = 0; k <= f.dim(); ++k)
    families.push_back(k == c.estimator.k ? make_family(f, c.family, k) : default_family(f, k));
  const DimensionalEntropyProfile p = build_profile(f, families, sched);
  std::optional<DimensionalEntropyProfile> inv;
  if (opt<bool>(c.options, "inverse", false) && f.invertible()) {
    std::vector<DiskFamily> inv_fams;
    for (int k = 0; k <= f.dim(); ++k) inv_fams.push_back(default_family(f.inverse(), k));
    inv = build_profile(f.inverse(), inv_fams, sched);
  }
  const EntropyValue h = reference_entropy(f, sched);
  const EntropyDimensions dims = entropy_dimensions(f, p, inv, h.value);
  Output out{Table({"k", "h_lower", "H_lower", "best_disk", "flags"}), json::object()};
  for (std::size_t i = 0; i < p.k_values.size(); ++i)
    out.table.row({std::to_string(p.k_values[i]), num(p.h_lower[i]), num(p.H_lower[i]), p.entries[i].best_disk, p.flags[i]});
  out.result = {{"profile", to_json(p)},
                {"dimensions", to_json(dims)},
                {"h_top", {{"value", h.value}, {"provenance", to_string(h.provenance)}}}};
  if (inv) out.result["inverse_profile"] = to_json(*inv);
  return out;
}

Output run_growth(const ExperimentConfig& c) {
  const SmoothMap f = build_system(c.system.name, c.system.params);
  const int k = c.estimator.k >= 0 ? c.estimator.k : 1;
  const DiskFamily fam = make_family(f, c.family, k);
  const FamilyMembers members = enumerate(fam);
  Output out{Table({"disk", "n", "volume", "log_volume"}), json::object()};
  json series = json::array(), curves = json::array();
  const bool curve = opt<bool>(c.options, "curve_check", k == 1);
  for (const SingularDisk& phi : members.members) {
    const VolumeSeries v = volume_growth(f, phi, c.estimator.n_max);
    for (std::size_t n = 0; n < v.values.size(); ++n)
      out.table.row({v.disk, std::to_string(n), num(v.values[n]), num(v.log_values[n])});
    series.push_back(to_json(v));
    out.partial = out.partial || !v.converged;
    if (curve && k == 1) {
      try {
        curves.push_back(to_json(length_vs_covering_check(f, phi, c.estimator.eps.front(), c.estimator.n_max,
                                                          static_cast<std::size_t>(c.estimator.max_cloud))));
      } catch (const Error& e) {
        curves.push_back({{"disk", phi.label()}, {"skipped", e.what()}});
      }
    }
  }
  out.result = {{"family", fam.name}, {"k", k}, {"series", series}, {"curve_checks", curves}};
  return out;
}

Output run_lyapunov(const ExperimentConfig& c) {
  const SmoothMap f = build_system(c.system.name, c.system.params);
  const int n = opt<int>(c.options, "n", 10000);
  const int transient = opt<int>(c.options, "transient", n / 100);
  const int seeds = opt<int>(c.options, "seeds", 4);
  const std::vector<LyapunovSpectrum> runs = seed_runs(f, seeds, c.seed, n, transient, c.workers);
  const EntropyValue h = reference_entropy(f, make_schedule(c));
  std::vector<std::string> cols{"run"};
  for (int i = 0; i < f.dim(); ++i) cols.push_back("lambda_" + std::to_string(i + 1));
  for (const char* s : {"sum", "log_det_average", "singular_hits", "reliable", "ruelle_margin"}) cols.emplace_back(s);
  Output out{Table(cols), json::object()};
  json list = json::array(), checks = json::array();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const LyapunovSpectrum& s = runs[r];
    const MarginReport m = ruelle_check(h, s);
    std::vector<std::string> row{std::to_string(r)};
    for (double e : s.exponents) row.push_back(num(e));
    row.push_back(num(s.sum()));
    row.push_back(num(s.log_det_average));
    row.push_back(std::to_string(s.singular_hits));
    row.push_back(s.reliable ? "true" : "false");
    row.push_back(num(m.margin));
    out.table.row(row);
    list.push_back(to_json(s));
    checks.push_back(to_json(m));
    for (int k = 1; k < f.dim(); ++k) checks.push_back(to_json(ruelle_newhouse_check(h, analytic_hk_upper(f, k), s, k)));
  }
  out.result = {{"runs", list},
                {"checks", checks},
                {"h", {{"value", h.value}, {"provenance", to_string(h.provenance)}, {"note", h.note}}}};
  return out;
}

Output run_resolution(const ExperimentConfig& c) {
  const SmoothMap f = build_system(c.system.name, c.system.params);
  const int k = c.estimator.k >= 0 ? c.estimator.k : 1;
  const DiskFamily fam = make_family(f, c.family, k);
  std::vector<int> horizons = c.estimator.horizons;
  if (horizons.empty())
    for (int n = 0; n <= std::min(c.estimator.n_max, 8); ++n) horizons.push_back(n);
  ResolutionOptions ro;
  ro.workers = c.workers;
  const ResolutionRate rate = resolution_entropy(f, fam, c.estimator.r, horizons, ro);
  Output out{Table({"disk", "n", "words"}), json::object()};
  for (std::size_t d = 0; d < rate.disks.size(); ++d)
    for (std::size_t i = 0; i < rate.horizons.size(); ++i)
      out.table.row({rate.disks[d], std::to_string(rate.horizons[i]), std::to_string(rate.leaves[d][i])});
  out.result = {{"rate", to_json(rate)}};
  out.partial = rate.partial;
  if (opt<bool>(c.options, "laws", false)) {
    const FamilyMembers members = enumerate(fam);
    json laws = json::array();
    const int ln = opt<int>(c.options, "n", 3), lm = opt<int>(c.options, "m", 3);
    for (const SingularDisk& phi : members.members)
      laws.push_back(to_json(check_resolution_laws(f, phi, c.estimator.r, ln, lm, c.estimator.eps.front(), 0.1, ro)));
    out.result["laws"] = laws;
  }
  return out;
}

Output run_certify(const ExperimentConfig& c) {
  const SmoothMap f = build_system(c.system.name, c.system.params);
  const EntropySchedule sched = make_schedule(c);
  EntropyValue h = reference_entropy(f, sched);
  if (c.options.contains("h")) h = {c.options.at("h").get<double>(), Provenance::Analytic, 0.02, "given in the config"};
  CertifyOptions co;
  co.floor = opt<double>(c.options, "floor", co.floor);
  const std::string type = opt<std::string>(c.options, "type", f.invertible() ? "hyperbolic" : "expanding");
  Certificate cert;
  if (type == "hyperbolic") {
    const int d1 = opt<int>(c.options, "d1", 1), d2 = opt<int>(c.options, "d2", f.dim() - 1);
    cert = certify_entropy_hyperbolic(f, h, d1, d2, co);
  } else if (type == "expanding") {
    cert = certify_entropy_expanding(f, h, co);
  } else {
    throw Error("certify: options.type must be 'expanding' or 'hyperbolic'");
  }
  std::vector<int> horizons = c.estimator.horizons;
  if (horizons.empty())
    for (int n = 1; n <= 12; ++n) horizons.push_back(n);
  const PeriodicBoundReport per = periodic_bound_check(f, h.value, horizons, BoundMode::Multiplicative);
  Output out{Table({"witness", "lhs", "rhs", "holds"}), json::object()};
  for (const Witness& w : cert.witnesses) out.table.row({w.name, num(w.lhs), num(w.rhs), w.holds ? "true" : "false"});
  for (std::size_t i = 0; i < per.horizons.size(); ++i)
    out.table.row({"e^{-nh} #Fix(f^" + std::to_string(per.horizons[i]) + ")", num(per.ratios[i]), "0", per.ratios[i] > 0 ? "true" : "false"});
  out.result = {{"certificate", to_json(cert)}, {"periodic", to_json(per)}};
  return out;
}

SkewConfig skew_config(const json& o) {
  SkewConfig s;
  s.alpha = opt<double>(o, "alpha", s.alpha);
  s.n_schedule = opt<std::vector<int>>(o, "n_schedule", s.n_schedule);
  s.levels = opt<int>(o, "levels", s.levels);
  s.eps = opt<double>(o, "eps", s.eps);
  s.points_per_lap = opt<int>(o, "points_per_lap", s.points_per_lap);
  s.max_points_per_lap = opt<int>(o, "max_points_per_lap", s.max_points_per_lap);
  s.max_cloud = opt<std::size_t>(o, "max_cloud", s.max_cloud);
  s.growth_window = opt<int>(o, "growth_window", s.growth_window);
  return s;
}

Output run_skewlab(const ExperimentConfig& c) {
  const SkewSeries s = run_schedule(skew_config(c.options));
  const SeparationReport rep = verify_separation(s, c.estimator.tolerance);
  Output out{Table({"i", "t", "N", "n_next", "log_r", "predicted_log_r", "log_r_lap_limit", "log_vol", "log_vol_exact",
                    "predicted_log_vol", "predicted_log_vol_display", "laps_at_N", "predicted_laps_at_N",
                    "shortened_by", "step_rate", "resolved"}),
             json::object()};
  for (const SkewPoint& p : s.points)
    out.table.row({std::to_string(p.i), std::to_string(p.t), std::to_string(p.N), std::to_string(p.n_next), num(p.log_r),
                   num(p.predicted_log_r), num(p.log_r_lap_limit), num(p.log_vol), num(p.log_vol_exact),
                   num(p.predicted_log_vol), num(p.predicted_log_vol_display), num(p.laps_at_N),
                   num(p.predicted_laps_at_N), std::to_string(p.shortened_by), num(p.step_rate),
                   p.resolved ? "true" : "false"});
  out.result = {{"series", to_json(s)}, {"separation", to_json(rep)}};
  out.partial = s.truncated;
  return out;
}

Output run_scan(const ExperimentConfig& c) {
  ScanOptions so;
  so.dim = opt<int>(c.options, "dim", 2);
  so.sigma = opt<double>(c.options, "sigma", 1.0);
  so.fibers = opt<std::vector<double>>(c.options, "fibers", so.fibers);
  so.schedule = make_schedule(c);
  so.fiber_schedule = so.schedule;
  so.fiber_schedule.max_cloud = opt<std::size_t>(c.options, "fiber_cloud", 200000);
  const auto lambdas = opt<std::vector<double>>(c.options, "lambdas", {0.0, 0.25, 0.5, 1.0});
  const SemicontinuityReport r = semicontinuity_scan(lambdas, so);
  std::vector<std::string> cols{"lambda", "h_estimate", "cube_estimate"};
  for (double x1 : so.fibers) cols.push_back("fiber_x1=" + num(x1));
  Output out{Table(cols), json::object()};
  for (const ScanRow& row : r.rows) {
    std::vector<std::string> cells{num(row.lambda), num(row.h_estimate), num(row.cube_estimate)};
    for (const auto& fe : row.fiber_estimates) cells.push_back(num(fe.second));
    out.table.row(cells);
  }
  out.result = {{"scan", to_json(r)}};
  return out;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, bool write) {
  if (config.workers > 0) set_default_workers(config.workers);
  Output out{Table({}), json::object()};
  const std::string& k = config.kind;
  if (k == "entropy")
    out = run_entropy(config);
  else if (k == "dimensional")
    out = run_dimensional(config);
  else if (k == "growth")
    out = run_growth(config);
  else if (k == "lyapunov")
    out = run_lyapunov(config);
  else if (k == "resolution")
    out = run_resolution(config);
  else if (k == "certify")
    out = run_certify(config);
  else if (k == "skewlab")
    out = run_skewlab(config);
  else if (k == "scan")
    out = run_scan(config);
  else
    throw Error("unknown experiment kind '" + k + "'");

  RunResult r;
  r.partial = out.partial;
  r.status = out.partial ? 3 : 0;
  std::ostringstream h;
  h << "# dimentropy " << k << (config.preset.empty() ? "" : " preset " + config.preset) << "\n";
  const std::string desc = preset_description(config.preset);
  if (!desc.empty()) h << "# experiment: " << desc << "\n";
  h << "# config: " << to_json(config).dump() << "\n";
  if (r.partial) h << "# partial: some estimates were truncated or saturated\n";
  r.header = h.str();
  r.csv = out.table.str();
  r.result = {{"config", to_json(config)}, {"result", out.result}, {"partial", r.partial}};
  if (write) {
    const std::string prefix = !config.output.prefix.empty() ? config.output.prefix
                               : !config.preset.empty()      ? config.preset
                                                             : config.kind;
    std::filesystem::create_directories(config.output.dir);
    const std::filesystem::path base = std::filesystem::path(config.output.dir) / prefix;
    std::ofstream(base.string() + ".csv") << r.header << r.csv;
    std::ofstream(base.string() + ".json") << r.result.dump(2) << "\n";
    r.artifacts = {base.string() + ".csv", base.string() + ".json"};
  }
  return r;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"torus-gap", "skewlab-default", "flambda-scan"};
  return names;
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig c;
  c.preset = name;
  if (name == "torus-gap") {
    c.kind = "entropy";
    c.system = {"toral", {{"matrix", {{2, 0}, {0, 3}}}}};
    c.estimator.k = 1;
    c.options = {{"torus_gap", {{"directions", 8}, {"lengths", {64.0, 256.0, 1024.0}}, {"unit_n_max", 12},
                                {"wrapped_n_max", 5}, {"unit_cloud", 1 << 18}, {"wrapped_cloud", 2800000}}}};
    return c;
  }
  if (name == "skewlab-default") {
    c.kind = "skewlab";
    c.system = {"skew_product", json::object()};
    c.options = to_json(SkewConfig{});
    return c;
  }
  if (name == "flambda-scan") {
    c.kind = "scan";
    c.system = {"f_lambda", json::object()};
    c.estimator.n_max = 16;
    c.estimator.max_cloud = 250000;
    c.options = {{"lambdas", {0.0, 0.25, 0.5, 1.0}}, {"fibers", {0.0, 0.25, 0.5, 0.75, 1.0}}, {"fiber_cloud", 200000}};
    return c;
  }
  throw Error("unknown preset '" + name + "'");
}

}  // namespace dimentropy
