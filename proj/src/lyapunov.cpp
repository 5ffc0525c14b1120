#include "dimentropy/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dimentropy/parallel.hpp"

namespace dimentropy {

double LyapunovSpectrum::sum() const {
  double s = 0.0;
  for (double l : exponents) s += l;
  return s;
}

double LyapunovSpectrum::positive_sum(std::size_t from) const {
  double s = 0.0;
  for (std::size_t i = from; i < exponents.size(); ++i) s += std::max(exponents[i], 0.0);
  return s;
}

LyapunovSpectrum lyapunov_spectrum(const SmoothMap& f, const Point& x0, int n, int transient,
                                   const LyapunovOptions& options) {
  if (n < 1 || transient < 0) throw Error("lyapunov_spectrum: need n >= 1 and transient >= 0");
  if (static_cast<long long>(n) < 10LL * transient) throw Error("lyapunov_spectrum: n must be at least 10 * transient");
  const int d = f.dim();
  LyapunovSpectrum out;
  out.orbit_length = n;
  out.transient = transient;
  out.basepoint = f.manifold().canonical(x0);

  // Logs below the clamp (including log 0 at critical points) are clamped;
  // hits on the cocycle diagonal are counted after the burn-in.
  const auto clamp_log = [&](double v, bool count_hit) {
    const double l = v > 0.0 ? std::log(v) : options.log_clamp;
    if (l > options.log_clamp) return l;
    if (count_hit) ++out.singular_hits;
    return options.log_clamp;
  };

  Point x = out.basepoint;
  Jacobian q = Jacobian::Identity(d, d);
  Jacobian acc = Jacobian::Identity(d, d);
  std::vector<double> sums(static_cast<std::size_t>(d), 0.0), at_three_quarters(static_cast<std::size_t>(d), 0.0);
  double log_det = 0.0;
  const int every = std::max(1, options.reorthogonalize_every);
  const int checkpoint = (3 * n) / 4;
  int pending = 0;

  const auto flush = [&](bool counting) {
    Eigen::HouseholderQR<Jacobian> qr(acc * q);
    const Jacobian r = qr.matrixQR();
    Jacobian qn = qr.householderQ();
    for (int a = 0; a < d; ++a) {
      if (r(a, a) < 0.0) qn.col(a) = -qn.col(a);
      const double l = clamp_log(std::abs(r(a, a)), counting);
      if (counting) sums[static_cast<std::size_t>(a)] += l;
    }
    q = qn;
    acc = Jacobian::Identity(d, d);
    pending = 0;
  };

  for (int step = 0; step < transient + n; ++step) {
    const bool counting = step >= transient;
    const Jacobian j = f.jacobian(x);
    if (counting) log_det += clamp_log(std::abs(j.determinant()), false);
    acc = j * acc;
    x = f.evaluate(x);
    if (++pending == every || step + 1 == transient || step + 1 == transient + n) flush(counting);
    if (counting && step + 1 - transient == checkpoint)
      for (int a = 0; a < d; ++a) at_three_quarters[static_cast<std::size_t>(a)] = sums[static_cast<std::size_t>(a)] / checkpoint;
  }

  for (int a = 0; a < d; ++a) {
    const double lam = sums[static_cast<std::size_t>(a)] / n;
    out.exponents.push_back(lam);
    out.drift.push_back(checkpoint > 0 ? std::abs(lam - at_three_quarters[static_cast<std::size_t>(a)]) : 0.0);
  }
  std::vector<std::size_t> order(static_cast<std::size_t>(d));
  for (std::size_t a = 0; a < order.size(); ++a) order[a] = a;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return out.exponents[a] > out.exponents[b]; });
  std::vector<double> ex, dr;
  for (std::size_t a : order) {
    ex.push_back(out.exponents[a]);
    dr.push_back(out.drift[a]);
  }
  out.exponents = std::move(ex);
  out.drift = std::move(dr);
  out.log_det_average = log_det / n;
  out.reliable = static_cast<double>(out.singular_hits) <= options.unreliable_fraction * n;
  return out;
}

Point random_point(const ManifoldModel& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point x(m.dim());
  for (int a = 0; a < m.dim(); ++a) {
    const Axis& ax = m.axis(a);
    x(a) = ax.kind == AxisKind::Circle ? u(rng) : ax.lo + (ax.hi - ax.lo) * u(rng);
  }
  return m.canonical(x);
}

std::vector<LyapunovSpectrum> seed_runs(const SmoothMap& f, int seeds, std::uint64_t seed, int n, int transient, int workers) {
  std::vector<LyapunovSpectrum> out(static_cast<std::size_t>(std::max(seeds, 0)));
  std::seed_seq seq{seed};
  std::vector<std::uint64_t> keys(out.size());
  std::vector<std::uint32_t> raw(2 * out.size());
  seq.generate(raw.begin(), raw.end());
  for (std::size_t i = 0; i < out.size(); ++i) keys[i] = (std::uint64_t{raw[2 * i]} << 32) | raw[2 * i + 1];
  parallel_for(
      out.size(),
      [&](std::size_t i) { out[i] = lyapunov_spectrum(f, random_point(f.manifold(), keys[i]), n, transient); },
      workers);
  return out;
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Analytic: return "analytic";
    case Provenance::BranchCountOracle: return "branch-count";
    case Provenance::CoveringEstimate: return "covering-estimate";
  }
  return "?";
}

MarginReport ruelle_check(const EntropyValue& h, const LyapunovSpectrum& spectrum) {
  MarginReport m;
  m.check = "ruelle";
  m.h = h.value;
  m.provenance = h.provenance;
  m.bound = spectrum.positive_sum();
  m.margin = m.bound - h.value;
  m.tolerance = h.tolerance;
  m.pass = m.margin >= -h.tolerance;
  m.status = "checked";
  m.flagged = h.provenance == Provenance::CoveringEstimate;
  return m;
}

MarginReport ruelle_newhouse_check(const EntropyValue& h, const std::optional<UpperBound>& h_upper,
                                   const LyapunovSpectrum& spectrum, int k) {
  if (k < 0 || k > static_cast<int>(spectrum.exponents.size())) throw Error("ruelle_newhouse_check: k out of range");
  MarginReport m;
  m.check = "ruelle-newhouse";
  m.k = k;
  m.h = h.value;
  m.provenance = h.provenance;
  m.tolerance = h.tolerance;
  m.flagged = h.provenance == Provenance::CoveringEstimate;
  std::optional<double> upper;
  if (k == 0) upper = 0.0;
  else if (h_upper) upper = h_upper->value;
  if (!upper) {
    m.status = "no valid upper bound";
    return m;
  }
  m.bound = *upper + spectrum.positive_sum(static_cast<std::size_t>(k));
  m.margin = m.bound - h.value;
  m.pass = m.margin >= -h.tolerance;
  m.status = "checked";
  return m;
}

nlohmann::json to_json(const LyapunovSpectrum& s) {
  std::vector<double> base(s.basepoint.data(), s.basepoint.data() + s.basepoint.size());
  return {{"exponents", s.exponents}, {"orbit_length", s.orbit_length}, {"transient", s.transient},
          {"basepoint", base},        {"drift", s.drift},               {"log_det_average", s.log_det_average},
          {"singular_hits", s.singular_hits}, {"reliable", s.reliable}};
}

nlohmann::json to_json(const MarginReport& m) {
  return {{"check", m.check}, {"k", m.k},           {"h", m.h},           {"provenance", to_string(m.provenance)},
          {"bound", m.bound}, {"margin", m.margin}, {"tolerance", m.tolerance}, {"pass", m.pass},
          {"status", m.status}, {"flagged", m.flagged}};
}

}  // namespace dimentropy
