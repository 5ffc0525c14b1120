#include "dimentropy/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dimentropy/covering.hpp"
#include "dimentropy/parallel.hpp"

namespace dimentropy {

namespace {

int default_norm_grid(int d) {
  switch (d) {
    case 1: return 2001;
    case 2: return 101;
    case 3: return 21;
    case 4: return 8;
    default: return 4;
  }
}

Point closed_grid_point(const ManifoldModel& m, int per_axis, std::size_t index) {
  Point x(m.dim());
  for (int a = m.dim() - 1; a >= 0; --a) {
    const auto i = static_cast<int>(index % static_cast<std::size_t>(per_axis));
    index /= static_cast<std::size_t>(per_axis);
    const Axis& ax = m.axis(a);
    x(a) = ax.lo + (ax.hi - ax.lo) * i / (per_axis - 1);
  }
  return x;
}

double top_products(const Jacobian& j, int k) {
  if (k == 0) return 1.0;
  Eigen::JacobiSVD<Jacobian> svd(j);
  const auto& s = svd.singularValues();
  double prod = 1.0, best = 0.0;
  for (int l = 0; l < k && l < s.size(); ++l) {
    prod *= s(l);
    best = std::max(best, prod);
  }
  return best;
}

struct GridSup {
  double value = 0.0;
  Point argmax;
};

GridSup grid_sup(const SmoothMap& f, int k, int per_axis) {
  const ManifoldModel& m = f.manifold();
  std::size_t total = 1;
  for (int a = 0; a < m.dim(); ++a) total *= static_cast<std::size_t>(per_axis);
  const std::size_t blocks = std::min<std::size_t>(total, 256);
  const std::size_t step = (total + blocks - 1) / blocks;
  std::vector<GridSup> part(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    GridSup best;
    for (std::size_t i = b * step; i < std::min(total, (b + 1) * step); ++i) {
      const Point x = closed_grid_point(m, per_axis, i);
      const double v = top_products(f.jacobian(x), k);
      if (v > best.value || best.argmax.size() == 0) {
        best.value = std::max(best.value, v);
        best.argmax = x;
      }
    }
    part[b] = best;
  });
  GridSup out = part.front();
  for (const GridSup& p : part)
    if (p.value > out.value) out = p;
  return out;
}

double lhs_log(double v) { return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity(); }

}  // namespace

double LambdaKNorm::log_value() const { return lhs_log(value); }

LambdaKNorm lambda_k_norm(const SmoothMap& f, int k, const NormOptions& options) {
  const int d = f.dim();
  if (k < 0 || k > d) throw Error("lambda_k_norm: k must lie in 0..d");
  LambdaKNorm out;
  out.k = k;
  if (k == 0) {
    out.argmax = Point::Zero(d);
    return out;
  }
  if (f.affine()) {
    const Point x = closed_grid_point(f.manifold(), 2, 0);
    out.raw = out.coarse = out.value = top_products(f.jacobian(x), k);
    out.argmax = x;
    out.grid = 1;
    return out;
  }
  const int coarse = std::max(2, options.grid > 0 ? options.grid : default_norm_grid(d));
  const int fine = 2 * coarse - 1;
  const GridSup c = grid_sup(f, k, coarse);
  const GridSup g = grid_sup(f, k, fine);
  out.coarse = c.value;
  out.raw = g.value;
  out.argmax = g.argmax;
  out.grid = fine;
  out.inflation = options.inflation;
  out.value = g.value * options.inflation;
  out.trend = g.value > 0.0 ? std::abs(g.value - c.value) / g.value : 0.0;
  out.stable = out.trend <= options.trend_limit;
  return out;
}

std::string to_string(CertificateKind k) {
  return k == CertificateKind::EntropyExpanding ? "entropy-expanding" : "entropy-hyperbolic";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "proved";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::RefutedAtResolution: return "refuted-at-resolution";
  }
  return "?";
}

Certificate certify_entropy_expanding(const SmoothMap& f, const EntropyValue& h_top_lower, const CertifyOptions& options) {
  Certificate c;
  c.kind = CertificateKind::EntropyExpanding;
  c.h_top = h_top_lower;
  c.floor = options.floor;
  const int d = f.dim();
  const LambdaKNorm norm = lambda_k_norm(f, d - 1, options.norm);
  c.norms.push_back(norm);
  const double threshold = h_top_lower.value - options.floor;
  const bool main = norm.log_value() < threshold;
  c.witnesses.push_back({"log|Lambda^(d-1) Tf| < h - floor", norm.log_value(), threshold, main,
                         norm.stable ? "" : "grid refinement moved the norm by more than the limit"});
  const double weak = (d - 1) * f.lip();
  c.witnesses.push_back({"(d-1) lip(f) < h", weak, h_top_lower.value, weak < h_top_lower.value, "weaker sufficient test"});
  if (options.h_dminus1_lower) {
    const bool refuted = *options.h_dminus1_lower >= h_top_lower.value + options.floor;
    c.witnesses.push_back({"H^(d-1) lower >= h + floor", *options.h_dminus1_lower, h_top_lower.value + options.floor,
                           refuted, "direct contradiction test"});
    if (refuted) {
      c.verdict = Verdict::RefutedAtResolution;
      c.reason = "a disk family reaches full entropy below full dimension";
      return c;
    }
  }
  if (main && norm.stable) {
    c.verdict = Verdict::Proved;
    c.reason = "Lambda^(d-1) norm bound below the entropy lower bound";
  } else {
    c.verdict = Verdict::Inconclusive;
    c.reason = main ? "norm not stable under grid refinement" : "sufficient condition not met";
  }
  return c;
}

Certificate certify_entropy_hyperbolic(const SmoothMap& f, const EntropyValue& h_top_lower, int d1, int d2,
                                       const CertifyOptions& options) {
  if (!f.invertible()) throw Error("entropy-hyperbolicity certificate needs a diffeomorphism; '" + f.name() + "' has no inverse");
  const int d = f.dim();
  if (d1 < 1 || d2 < 1 || d1 + d2 != d) throw Error("certify_entropy_hyperbolic: need d1, d2 >= 1 with d1 + d2 = d");
  Certificate c;
  c.kind = CertificateKind::EntropyHyperbolic;
  c.h_top = h_top_lower;
  c.floor = options.floor;
  const double threshold = h_top_lower.value - options.floor;
  const LambdaKNorm a = lambda_k_norm(f, d1 - 1, options.norm);
  const LambdaKNorm b = lambda_k_norm(f.inverse(), d2 - 1, options.norm);
  const LambdaKNorm b_forward = lambda_k_norm(f, d2 - 1, options.norm);
  c.norms = {a, b, b_forward};
  const bool ha = a.log_value() < threshold, hb = b.log_value() < threshold;
  c.witnesses.push_back({"log|Lambda^(d1-1) Tf| < h - floor", a.log_value(), threshold, ha, ""});
  c.witnesses.push_back({"log|Lambda^(d2-1) Tf^-1| < h - floor", b.log_value(), threshold, hb, "used for the verdict"});
  c.witnesses.push_back({"log|Lambda^(d2-1) Tf| < h - floor", b_forward.log_value(), threshold,
                         b_forward.log_value() < threshold, "both norms on f; reported only"});
  const bool stable = a.stable && b.stable;
  if (ha && hb && stable) {
    c.verdict = Verdict::Proved;
    c.reason = "both Lambda norm bounds below the entropy lower bound";
  } else {
    c.verdict = Verdict::Inconclusive;
    c.reason = ha && hb ? "norm not stable under grid refinement" : "sufficient condition not met";
  }
  return c;
}

PeriodicBoundReport periodic_bound_check(const SmoothMap& f, double h, const std::vector<int>& horizons, BoundMode mode,
                                         int period, double tolerance) {
  PeriodicBoundReport r;
  r.mode = mode;
  r.h = h;
  r.period = std::max(period, 1);
  try {
    for (int n : horizons) {
      if (mode == BoundMode::Multiplicative && n % r.period != 0) continue;
      r.horizons.push_back(n);
      r.counts.push_back(count_periodic(f, n));
    }
  } catch (const Error& e) {
    r.skipped = true;
    r.status = std::string("skipped: ") + e.what();
    r.horizons.clear();
    r.counts.clear();
    return r;
  }
  if (r.horizons.empty()) {
    r.skipped = true;
    r.status = "skipped: no admissible horizons";
    return r;
  }
  for (std::uint64_t c : r.counts) r.zero_counts = r.zero_counts || c == 0;
  if (mode == BoundMode::Multiplicative) {
    for (std::size_t i = 0; i < r.horizons.size(); ++i)
      r.ratios.push_back(std::exp(std::log(static_cast<double>(r.counts[i])) - r.horizons[i] * h));
    r.min_ratio = *std::min_element(r.ratios.begin(), r.ratios.end());
    if (r.horizons.size() >= 2 && r.min_ratio > 0.0) {
      std::vector<std::pair<int, double>> pts;
      for (std::size_t i = 0; i < r.horizons.size(); ++i) pts.emplace_back(r.horizons[i], std::log(r.ratios[i]));
      r.trend = least_squares_slope(pts);
    }
    r.pass = r.min_ratio > 0.0 && r.trend >= -tolerance;
  } else {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.horizons.size(); ++i) {
      const double v = r.counts[i] > 0 ? std::log(static_cast<double>(r.counts[i])) / r.horizons[i]
                                       : -std::numeric_limits<double>::infinity();
      r.ratios.push_back(std::isfinite(v) ? v : 0.0);
      best = std::max(best, v);
    }
    r.min_ratio = *std::min_element(r.ratios.begin(), r.ratios.end());
    r.pass = h <= 0.0 || best >= h - tolerance;
  }
  r.status = r.zero_counts ? (h <= 0.0 ? "vacuous: h = 0, zero counts" : "zero counts") : "checked";
  return r;
}

nlohmann::json to_json(const LambdaKNorm& n) {
  std::vector<double> arg(n.argmax.data(), n.argmax.data() + n.argmax.size());
  return {{"k", n.k},         {"value", n.value}, {"raw", n.raw},         {"coarse", n.coarse}, {"trend", n.trend},
          {"grid", n.grid},   {"inflation", n.inflation}, {"argmax", arg}, {"stable", n.stable}};
}

nlohmann::json to_json(const Certificate& c) {
  nlohmann::json w = nlohmann::json::array();
  for (const Witness& x : c.witnesses)
    w.push_back({{"name", x.name}, {"lhs", std::isfinite(x.lhs) ? nlohmann::json(x.lhs) : nlohmann::json("-inf")},
                 {"rhs", x.rhs}, {"holds", x.holds}, {"note", x.note}});
  nlohmann::json norms = nlohmann::json::array();
  for (const LambdaKNorm& n : c.norms) norms.push_back(to_json(n));
  return {{"kind", to_string(c.kind)},
          {"verdict", to_string(c.verdict)},
          {"h_top", {{"value", c.h_top.value}, {"provenance", to_string(c.h_top.provenance)}, {"note", c.h_top.note}}},
          {"floor", c.floor},
          {"witnesses", w},
          {"norms", norms},
          {"reason", c.reason}};
}

nlohmann::json to_json(const PeriodicBoundReport& r) {
  return {{"mode", r.mode == BoundMode::Multiplicative ? "multiplicative" : "logarithmic"},
          {"h", r.h},
          {"period", r.period},
          {"horizons", r.horizons},
          {"counts", r.counts},
          {"ratios", r.ratios},
          {"min_ratio", r.min_ratio},
          {"trend", r.trend},
          {"pass", r.pass},
          {"skipped", r.skipped},
          {"zero_counts", r.zero_counts},
          {"status", r.status}};
}

}  // namespace dimentropy
