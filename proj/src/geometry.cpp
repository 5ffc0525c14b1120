#include "dimentropy/geometry.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace dimentropy {

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(int vars, std::vector<Monomial> terms) : vars_(vars), terms_(std::move(terms)) {
  for (const Monomial& m : terms_)
    if (static_cast<int>(m.exponents.size()) != vars_) throw Error("monomial exponent count does not match variable count");
}

Polynomial Polynomial::constant(int vars, double c) {
  return Polynomial(vars, {Monomial{c, MultiIndex(static_cast<std::size_t>(vars), 0)}});
}

Polynomial Polynomial::affine(double c, const std::vector<double>& linear) {
  const int k = static_cast<int>(linear.size());
  std::vector<Monomial> terms{Monomial{c, MultiIndex(static_cast<std::size_t>(k), 0)}};
  for (int i = 0; i < k; ++i) {
    MultiIndex e(static_cast<std::size_t>(k), 0);
    e[static_cast<std::size_t>(i)] = 1;
    terms.push_back(Monomial{linear[static_cast<std::size_t>(i)], e});
  }
  return Polynomial(k, std::move(terms));
}

int Polynomial::degree() const {
  int d = 0;
  for (const Monomial& m : terms_)
    if (m.coeff != 0.0) d = std::max(d, std::accumulate(m.exponents.begin(), m.exponents.end(), 0));
  return d;
}

double Polynomial::operator()(const Param& t) const {
  double s = 0.0;
  for (const Monomial& m : terms_) {
    double v = m.coeff;
    for (int i = 0; i < vars_; ++i) v *= std::pow(t(i), m.exponents[static_cast<std::size_t>(i)]);
    s += v;
  }
  return s;
}

double Polynomial::derivative(const Param& t, const MultiIndex& alpha) const {
  double s = 0.0;
  for (const Monomial& m : terms_) {
    double v = m.coeff;
    for (int i = 0; i < vars_ && v != 0.0; ++i) {
      const int e = m.exponents[static_cast<std::size_t>(i)];
      const int a = alpha[static_cast<std::size_t>(i)];
      if (a > e) {
        v = 0.0;
        break;
      }
      for (int j = 0; j < a; ++j) v *= e - j;
      v *= std::pow(t(i), e - a);
    }
    s += v;
  }
  return s;
}

// ---------------------------------------------------------------------------
// SingularDisk

SingularDisk::SingularDisk(Spec spec) : spec_(std::move(spec)) {
  if (spec_.k < 0 || spec_.k > spec_.manifold.dim()) throw Error("disk dimension k must satisfy 0 <= k <= d");
  if (!spec_.eval) throw Error("disk needs a parameterization");
  if (spec_.gridres < 2) spec_.gridres = 2;
}

bool SingularDisk::has_analytic(int order) const {
  if (!spec_.deriv) return false;
  return spec_.analytic_order == kInfiniteOrder || order <= spec_.analytic_order;
}

SingularDisk SingularDisk::with_gridres(int gridres) const {
  Spec s = spec_;
  s.gridres = std::max(gridres, 2);
  return SingularDisk(s);
}

SingularDisk SingularDisk::affine(const ManifoldModel& m, const Point& base, const Tangent& a, std::string label) {
  if (a.rows() != m.dim() || base.size() != m.dim()) throw Error("affine disk: dimension mismatch");
  Spec s;
  s.manifold = m;
  s.k = static_cast<int>(a.cols());
  s.eval = [base, a](const Param& t) { return Point(base + a * t); };
  s.deriv = [a, d = m.dim()](const Param&, const MultiIndex& alpha) {
    const int order = std::accumulate(alpha.begin(), alpha.end(), 0);
    if (order != 1) return Point(Point::Zero(d));
    const auto i = std::find(alpha.begin(), alpha.end(), 1) - alpha.begin();
    return Point(a.col(i));
  };
  s.analytic_order = kInfiniteOrder;
  s.label = std::move(label);
  return SingularDisk(s);
}

SingularDisk SingularDisk::segment(const ManifoldModel& m, const Point& base, const Point& direction, double length) {
  const double norm = direction.norm();
  if (!(norm > 0.0)) throw Error("segment direction must be nonzero");
  if (!(length > 0.0)) throw Error("segment length must be positive");
  const Point u = direction / norm;
  Tangent a = u * (length / 2.0);
  return affine(m, Point(base + a.col(0)), a, "segment");
}

SingularDisk SingularDisk::polynomial(const ManifoldModel& m, std::vector<Polynomial> coords, std::string label) {
  if (static_cast<int>(coords.size()) != m.dim()) throw Error("polynomial disk needs one polynomial per coordinate");
  const int k = coords.empty() ? 0 : coords.front().vars();
  for (const Polynomial& p : coords)
    if (p.vars() != k) throw Error("polynomial disk coordinates must share the parameter dimension");
  Spec s;
  s.manifold = m;
  s.k = k;
  s.eval = [coords](const Param& t) {
    Point x(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t j = 0; j < coords.size(); ++j) x(static_cast<Eigen::Index>(j)) = coords[j](t);
    return x;
  };
  s.deriv = [coords](const Param& t, const MultiIndex& alpha) {
    Point x(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t j = 0; j < coords.size(); ++j) x(static_cast<Eigen::Index>(j)) = coords[j].derivative(t, alpha);
    return x;
  };
  s.analytic_order = kInfiniteOrder;
  s.label = std::move(label);
  return SingularDisk(s);
}

SingularDisk SingularDisk::chart_cube(const ManifoldModel& m) {
  const int d = m.dim();
  Point base(d);
  Tangent a = Tangent::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const Axis& ax = m.axis(i);
    base(i) = 0.5 * (ax.lo + ax.hi);
    a(i, i) = 0.5 * (ax.hi - ax.lo);
  }
  return affine(m, base, a, "chart-cube");
}

SingularDisk SingularDisk::constant(const ManifoldModel& m, int k, const Point& value) {
  return affine(m, value, Tangent::Zero(m.dim(), k), "constant");
}

namespace {

struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;  // divided by h^s separately
};

const Stencil& central_stencil(int s) {
  static const Stencil st[5] = {
      {{0}, {1.0}},
      {{-1, 1}, {-0.5, 0.5}},
      {{-1, 0, 1}, {1.0, -2.0, 1.0}},
      {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}},
      {{-2, -1, 0, 1, 2}, {1.0, -4.0, 6.0, -4.0, 1.0}},
  };
  return st[s];
}

}  // namespace

Point SingularDisk::finite_difference(const Param& t, const MultiIndex& alpha, double h_fd) const {
  const int k = spec_.k;
  const int order = std::accumulate(alpha.begin(), alpha.end(), 0);
  if (order > kMaxFiniteDifferenceOrder)
    throw Error("finite differences are capped at order 4; supply analytic derivatives beyond");
  if (order == 0) return lift(t);
  const double h = std::max(h_fd, std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (order + 2)));
  std::vector<int> axes;
  for (int i = 0; i < k; ++i)
    if (alpha[static_cast<std::size_t>(i)] > 0) axes.push_back(i);
  Point acc = Point::Zero(dim());
  // Tensor product of 1D central stencils over the differentiated axes.
  std::vector<std::size_t> pos(axes.size(), 0);
  while (true) {
    Param s = t;
    double w = 1.0;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const Stencil& st = central_stencil(alpha[static_cast<std::size_t>(axes[a])]);
      s(axes[a]) += st.offsets[pos[a]] * h;
      w *= st.weights[pos[a]];
    }
    acc += w * lift(s);
    std::size_t a = 0;
    for (; a < axes.size(); ++a) {
      const Stencil& st = central_stencil(alpha[static_cast<std::size_t>(axes[a])]);
      if (++pos[a] < st.offsets.size()) break;
      pos[a] = 0;
    }
    if (a == axes.size()) break;
  }
  return acc / std::pow(h, order);
}

Point SingularDisk::derivative(const Param& t, const MultiIndex& alpha, double h_fd) const {
  const int order = std::accumulate(alpha.begin(), alpha.end(), 0);
  if (order == 0) return lift(t);
  if (has_analytic(order)) return spec_.deriv(t, alpha);
  return finite_difference(t, alpha, h_fd);
}

Tangent SingularDisk::tangent(const Param& t, double h_fd) const {
  Tangent j(dim(), spec_.k);
  MultiIndex alpha(static_cast<std::size_t>(spec_.k), 0);
  for (int i = 0; i < spec_.k; ++i) {
    alpha[static_cast<std::size_t>(i)] = 1;
    j.col(i) = derivative(t, alpha, h_fd);
    alpha[static_cast<std::size_t>(i)] = 0;
  }
  return j;
}

SingularDisk SingularDisk::restrict(const Param& center, const Param& half) const {
  if (center.size() != spec_.k || half.size() != spec_.k) throw Error("restriction: parameter dimension mismatch");
  Spec s = spec_;
  auto parent = std::make_shared<const SingularDisk>(*this);
  s.eval = [parent, center, half](const Param& t) { return parent->lift(Param(center + half.cwiseProduct(t))); };
  if (spec_.deriv) {
    s.deriv = [parent, center, half](const Param& t, const MultiIndex& alpha) {
      double scale = 1.0;
      for (std::size_t i = 0; i < alpha.size(); ++i) scale *= std::pow(half(static_cast<Eigen::Index>(i)), alpha[i]);
      return Point(scale * parent->spec_.deriv(Param(center + half.cwiseProduct(t)), alpha));
    };
  }
  return SingularDisk(s);
}

SingularDisk SingularDisk::push_forward(std::shared_ptr<const SmoothMap> f, int m) const {
  if (!f) throw Error("push_forward: null map");
  if (m < 0) throw Error("push_forward: m must be >= 0");
  if (m == 0) return *this;
  if (f->dim() != dim()) throw Error("push_forward: map and disk live on different manifolds");
  Spec s = spec_;
  auto parent = std::make_shared<const SingularDisk>(*this);
  s.eval = [parent, f, m](const Param& t) {
    Point x = parent->lift(t);
    for (int j = 0; j < m; ++j) x = f->lift(x);
    return x;
  };
  if (f->affine()) {
    Jacobian a = f->jacobian(Point::Zero(f->dim()));
    Jacobian am = Jacobian::Identity(f->dim(), f->dim());
    for (int j = 0; j < m; ++j) am = a * am;
    s.deriv = [parent, am](const Param& t, const MultiIndex& alpha) {
      return Point(am * parent->derivative(t, alpha));
    };
    s.analytic_order = spec_.deriv ? spec_.analytic_order : 0;
    if (!spec_.deriv) s.deriv = {};
  } else {
    s.deriv = [parent, f, m](const Param& t, const MultiIndex& alpha) {
      Point v = parent->derivative(t, alpha);
      Point x = parent->lift(t);
      const ManifoldModel& man = f->manifold();
      for (int j = 0; j < m; ++j) {
        v = f->jacobian(man.canonical(x)) * v;
        x = f->lift(x);
      }
      return v;
    };
    s.analytic_order = 1;
  }
  s.label = spec_.label + "|" + f->name() + "^" + std::to_string(m);
  return SingularDisk(s);
}

// ---------------------------------------------------------------------------

std::vector<MultiIndex> multi_indices(int k, int lo, int hi) {
  std::vector<MultiIndex> out;
  MultiIndex a(static_cast<std::size_t>(k), 0);
  std::function<void(int, int)> rec = [&](int axis, int remaining) {
    if (axis == k) {
      const int total = hi - remaining;
      if (total >= lo) out.push_back(a);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      a[static_cast<std::size_t>(axis)] = e;
      rec(axis + 1, remaining - e);
    }
    a[static_cast<std::size_t>(axis)] = 0;
  };
  if (hi >= 0) rec(0, hi);
  return out;
}

std::vector<Param> parameter_grid(int k, int per_axis) {
  if (k == 0) return {Param(0)};
  per_axis = std::max(per_axis, 2);
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= static_cast<std::size_t>(per_axis);
  std::vector<Param> pts;
  pts.reserve(total);
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  for (std::size_t c = 0; c < total; ++c) {
    Param t(k);
    for (int i = 0; i < k; ++i) t(i) = -1.0 + 2.0 * idx[static_cast<std::size_t>(i)] / (per_axis - 1);
    pts.push_back(t);
    for (int i = 0; i < k; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < per_axis) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return pts;
}

CrSize cr_size(const SingularDisk& phi, int r, ChartConvention convention, double h_fd, int gridres) {
  if (r == kInfiniteOrder) throw Error("C^infinity size is not a number; use per-r sizes");
  if (r < 0) throw Error("C^r size needs r >= 0");
  const auto indices = multi_indices(phi.k(), 1, r);
  CrSize out;
  out.r = r;
  out.analytic = phi.has_analytic(r) || r == 0;
  if (!out.analytic && r > kMaxFiniteDifferenceOrder)
    throw Error("finite differences are capped at order 4; supply analytic derivatives beyond");
  const auto grid = parameter_grid(phi.k(), gridres > 0 ? gridres : phi.gridres());
  const ManifoldModel& m = phi.manifold();
  for (const Param& t : grid) {
    const Point x = phi.lift(t);
    double c0 = 0.0;
    for (int j = 0; j < phi.dim(); ++j) c0 = std::max(c0, std::abs(m.chart_coordinate(j, x(j), convention)));
    double v = c0;
    for (const MultiIndex& a : indices) v = std::max(v, phi.derivative(t, a, h_fd).cwiseAbs().maxCoeff());
    out.c0 = std::max(out.c0, c0);
    if (v > out.value || out.argmax.size() == 0) {
      out.value = std::max(out.value, v);
      out.argmax = t;
    }
  }
  return out;
}

std::vector<SingularDisk> subdivide(const SingularDisk& phi, int pieces_per_axis) {
  if (pieces_per_axis < 1) throw Error("subdivide: pieces_per_axis must be >= 1");
  if (pieces_per_axis == 1 || phi.k() == 0) return {phi};
  const int k = phi.k();
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= static_cast<std::size_t>(pieces_per_axis);
  std::vector<SingularDisk> out;
  out.reserve(total);
  const double half = 1.0 / pieces_per_axis;
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  for (std::size_t c = 0; c < total; ++c) {
    Param center(k), hw(k);
    for (int i = 0; i < k; ++i) {
      center(i) = -1.0 + (2 * idx[static_cast<std::size_t>(i)] + 1) * half;
      hw(i) = half;
    }
    out.push_back(phi.restrict(center, hw));
    for (int i = 0; i < k; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < pieces_per_axis) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return out;
}

TaylorResult taylor_smooth(const SingularDisk& phi, int r, const Param& t0, double h_fd) {
  if (r < 1 || r == kInfiniteOrder) throw Error("taylor_smooth needs a finite order r >= 1");
  const int k = phi.k();
  const int d = phi.dim();
  // Polynomials in u = t - t0.
  std::vector<std::vector<Monomial>> terms(static_cast<std::size_t>(d));
  for (const MultiIndex& a : multi_indices(k, 0, r - 1)) {
    const Point c = phi.derivative(t0, a, h_fd);
    double fact = 1.0;
    for (int e : a)
      for (int j = 2; j <= e; ++j) fact *= j;
    for (int j = 0; j < d; ++j) terms[static_cast<std::size_t>(j)].push_back(Monomial{c(j) / fact, a});
  }
  std::vector<Polynomial> coords;
  for (auto& t : terms) coords.emplace_back(k, std::move(t));
  SingularDisk::Spec s;
  s.manifold = phi.manifold();
  s.k = k;
  s.eval = [coords, t0](const Param& t) {
    const Param u = t - t0;
    Point x(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t j = 0; j < coords.size(); ++j) x(static_cast<Eigen::Index>(j)) = coords[j](u);
    return x;
  };
  s.deriv = [coords, t0](const Param& t, const MultiIndex& alpha) {
    const Param u = t - t0;
    Point x(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t j = 0; j < coords.size(); ++j) x(static_cast<Eigen::Index>(j)) = coords[j].derivative(u, alpha);
    return x;
  };
  s.analytic_order = kInfiniteOrder;
  s.label = phi.label() + "|taylor" + std::to_string(r - 1);
  s.gridres = phi.gridres();

  TaylorResult out{SingularDisk(s)};
  out.size = cr_size(phi, r, ChartConvention::UnitInterval, h_fd).value;
  for (const Param& t : parameter_grid(k, phi.gridres())) {
    const double err = phi.manifold().distance(out.disk.point(t), phi.point(t));
    const double dist = (t - t0).cwiseAbs().sum();
    const double bound = out.size * std::pow(dist, r);
    out.max_error = std::max(out.max_error, err);
    if (bound > 0.0) out.worst_ratio = std::max(out.worst_ratio, err / bound);
    if (err > bound * (1.0 + 1e-9) + 1e-12) out.bound_holds = false;
  }
  return out;
}

FamilyMembers enumerate(const DiskFamily& family, double h_fd) {
  FamilyMembers out;
  auto offer = [&](const SingularDisk& disk) {
    if (family.size_bound) {
      const double v = cr_size(disk, family.size_order, ChartConvention::UnitInterval, h_fd).value;
      if (v > *family.size_bound + 1e-9) {
        ++out.rejected_by_size;
        return true;
      }
    }
    if (out.members.size() >= family.max_members) {
      out.truncated = true;
      return false;
    }
    out.members.push_back(disk);
    return true;
  };
  for (const SingularDisk& g : family.generators) {
    for (int j = 0; j <= family.subdivision_depth; ++j)
      for (const SingularDisk& piece : subdivide(g, 1 << j))
        if (!offer(piece)) return out;
    for (double sc : family.scalings) {
      if (!(sc > 0.0 && sc <= 1.0)) throw Error("family scalings must lie in (0, 1]");
      if (!offer(g.restrict(Param::Zero(g.k()), Param::Constant(g.k(), sc)))) return out;
    }
  }
  return out;
}

}  // namespace dimentropy
