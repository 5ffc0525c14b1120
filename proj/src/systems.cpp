#include "dimentropy/systems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace dimentropy {

using nlohmann::json;

Point make_point(std::initializer_list<double> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p(i++) = c;
  return p;
}

// ---------------------------------------------------------------------------
// ManifoldModel

ManifoldModel ManifoldModel::torus(int d) {
  if (d < 1 || d > kMaxDim) throw Error("torus dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  ManifoldModel m;
  m.kind_ = Kind::Torus;
  m.axes_.assign(static_cast<std::size_t>(d), Axis{AxisKind::Circle, 0.0, 1.0});
  return m;
}

ManifoldModel ManifoldModel::cube(int d, double lo, double hi) {
  return cube(std::vector<std::pair<double, double>>(static_cast<std::size_t>(d), {lo, hi}));
}

ManifoldModel ManifoldModel::cube(std::vector<std::pair<double, double>> bounds) {
  if (bounds.empty() || bounds.size() > kMaxDim) throw Error("cube dimension out of range");
  ManifoldModel m;
  m.kind_ = Kind::Cube;
  for (auto [lo, hi] : bounds) {
    if (!(lo < hi)) throw Error("cube bounds must satisfy lo < hi");
    m.axes_.push_back(Axis{AxisKind::Interval, lo, hi});
  }
  return m;
}

ManifoldModel ManifoldModel::circle_cross_interval(double lo, double hi) {
  if (!(lo < hi)) throw Error("interval bounds must satisfy lo < hi");
  ManifoldModel m;
  m.kind_ = Kind::CircleCrossInterval;
  m.axes_ = {Axis{AxisKind::Circle, 0.0, 1.0}, Axis{AxisKind::Interval, lo, hi}};
  return m;
}

std::string ManifoldModel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Torus: os << "T^" << dim(); break;
    case Kind::CircleCrossInterval: os << "S1x[" << axes_[1].lo << "," << axes_[1].hi << "]"; break;
    case Kind::Cube:
      for (std::size_t i = 0; i < axes_.size(); ++i) os << (i ? "x" : "") << "[" << axes_[i].lo << "," << axes_[i].hi << "]";
      break;
  }
  return os.str();
}

double ManifoldModel::axis_distance(int i, double a, double b) const {
  double delta = std::abs(a - b);
  if (axis(i).kind == AxisKind::Circle) {
    delta = delta - std::floor(delta);
    return std::min(delta, 1.0 - delta);
  }
  return delta;
}

double ManifoldModel::distance(const Point& x, const Point& y) const {
  double d = 0.0;
  for (int i = 0; i < dim(); ++i) d = std::max(d, axis_distance(i, x(i), y(i)));
  return d;
}

Point ManifoldModel::canonical(Point x) const {
  for (int i = 0; i < dim(); ++i) {
    const Axis& a = axis(i);
    if (a.kind == AxisKind::Circle) {
      double v = x(i) - std::floor(x(i));
      if (v >= 1.0) v = 0.0;
      x(i) = v;
    } else {
      x(i) = std::clamp(x(i), a.lo, a.hi);
    }
  }
  return x;
}

bool ManifoldModel::is_canonical(const Point& x) const {
  if (x.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    const Axis& a = axis(i);
    if (!std::isfinite(x(i))) return false;
    if (a.kind == AxisKind::Circle) {
      if (x(i) < 0.0 || x(i) >= 1.0) return false;
    } else if (x(i) < a.lo || x(i) > a.hi) {
      return false;
    }
  }
  return true;
}

double ManifoldModel::chart_coordinate(int i, double x, ChartConvention convention) const {
  if (axis(i).kind != AxisKind::Circle) return x;
  double v = x - std::floor(x);
  if (convention == ChartConvention::Centered && v >= 0.5) v -= 1.0;
  return v;
}

// ---------------------------------------------------------------------------
// SmoothMap

std::string to_string(Family f) {
  switch (f) {
    case Family::Identity: return "identity";
    case Family::Rotation: return "rotation";
    case Family::Logistic: return "logistic";
    case Family::Quadratic: return "quadratic";
    case Family::Toral: return "toral";
    case Family::CoupledQuadratic: return "coupled_quadratic";
    case Family::FLambda: return "f_lambda";
    case Family::CircleLogisticProduct: return "circle_logistic_product";
  }
  return "unknown";
}

double max_norm_operator(const Jacobian& j) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < j.rows(); ++r) best = std::max(best, j.row(r).cwiseAbs().sum());
  return best;
}

namespace {

// Grid including the boundary of interval axes, used for sup estimates.
std::vector<Point> closed_grid(const ManifoldModel& m, int per_axis) {
  const int d = m.dim();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(per_axis);
  std::vector<Point> pts;
  pts.reserve(total);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t c = 0; c < total; ++c) {
    Point p(d);
    for (int i = 0; i < d; ++i) {
      const Axis& a = m.axis(i);
      const double s = per_axis == 1 ? 0.5 : static_cast<double>(idx[static_cast<std::size_t>(i)]) / (per_axis - 1);
      p(i) = a.kind == AxisKind::Circle ? std::min(s, 1.0 - 1e-12) : a.lo + s * (a.hi - a.lo);
    }
    pts.push_back(p);
    for (int i = 0; i < d; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < per_axis) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return pts;
}

int default_lipschitz_grid(int d) {
  switch (d) {
    case 1: return 4001;
    case 2: return 201;
    case 3: return 41;
    case 4: return 15;
    default: return 7;
  }
}

}  // namespace

SmoothMap::SmoothMap(Definition def, double lipschitz_safety, int lipschitz_grid)
    : def_(std::move(def)), safety_(lipschitz_safety) {
  if (!def_.lift || !def_.jacobian) throw Error("smooth map '" + def_.name + "' needs evaluation and jacobian");
  if (lipschitz_safety < 1.0) throw Error("Lipschitz safety factor must be >= 1");
  double sup = 0.0;
  if (def_.affine) {
    sup = max_norm_operator(def_.jacobian(Point::Zero(dim())));
  } else {
    const int per_axis = lipschitz_grid > 0 ? lipschitz_grid : default_lipschitz_grid(dim());
    for (const Point& p : closed_grid(def_.manifold, per_axis)) sup = std::max(sup, max_norm_operator(def_.jacobian(p)));
  }
  lipschitz_ = sup * safety_;
}

const SmoothMap& SmoothMap::inverse() const {
  if (!def_.inverse) throw Error("map '" + def_.name + "' is not invertible");
  return *def_.inverse;
}

double SmoothMap::lip() const { return std::max(std::log(lipschitz_), 0.0); }

std::vector<Point> manifold_grid(const ManifoldModel& m, int per_axis) {
  if (per_axis < 1) throw Error("grid needs at least one sample per axis");
  const int d = m.dim();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(per_axis);
  std::vector<Point> pts;
  pts.reserve(total);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t c = 0; c < total; ++c) {
    Point p(d);
    for (int i = 0; i < d; ++i) {
      const Axis& a = m.axis(i);
      const double s = (idx[static_cast<std::size_t>(i)] + 0.5) / per_axis;
      p(i) = a.lo + s * (a.hi - a.lo);
    }
    pts.push_back(p);
    for (int i = 0; i < d; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < per_axis) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Integer linear algebra

std::int64_t integer_determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw Error("determinant of a non-square matrix");
  const Eigen::Index n = m.rows();
  std::vector<std::vector<__int128>> a(static_cast<std::size_t>(n), std::vector<__int128>(static_cast<std::size_t>(n)));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  __int128 sign = 1, prev = 1;
  auto at = [&](Eigen::Index i, Eigen::Index j) -> __int128& { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      Eigen::Index swap = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (at(i, k) != 0) { swap = i; break; }
      if (swap < 0) return 0;
      std::swap(a[static_cast<std::size_t>(k)], a[static_cast<std::size_t>(swap)]);
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  const __int128 det = sign * at(n - 1, n - 1);
  if (det > std::numeric_limits<std::int64_t>::max() || det < std::numeric_limits<std::int64_t>::min())
    throw Error("integer determinant overflows 64 bits");
  return static_cast<std::int64_t>(det);
}

IntMatrix integer_power(const IntMatrix& m, int n) {
  IntMatrix result = IntMatrix::Identity(m.rows(), m.cols());
  IntMatrix base = m;
  auto mul = [](const IntMatrix& x, const IntMatrix& y) {
    IntMatrix z = IntMatrix::Zero(x.rows(), y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < y.cols(); ++j) {
        __int128 s = 0;
        for (Eigen::Index k = 0; k < x.cols(); ++k) s += static_cast<__int128>(x(i, k)) * y(k, j);
        if (s > std::numeric_limits<std::int64_t>::max() || s < std::numeric_limits<std::int64_t>::min())
          throw Error("integer matrix power overflows 64 bits");
        z(i, j) = static_cast<std::int64_t>(s);
      }
    return z;
  };
  while (n > 0) {
    if (n & 1) result = mul(result, base);
    n >>= 1;
    if (n > 0) base = mul(base, base);
  }
  return result;
}

double toral_entropy(const IntMatrix& m) {
  Eigen::MatrixXd a = m.cast<double>();
  Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  double h = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double mod = std::abs(es.eigenvalues()(i));
    if (mod > 1.0) h += std::log(mod);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

void check_keys(const json& params, std::initializer_list<const char*> allowed, const std::string& name) {
  if (!params.is_object()) throw Error("parameters for '" + name + "' must be a JSON object");
  for (auto it = params.begin(); it != params.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw Error("unknown parameter '" + it.key() + "' for system '" + name + "'");
  }
}

template <class T>
T param_or(const json& params, const char* key, T fallback) {
  if (!params.contains(key)) return fallback;
  try {
    return params.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(std::string("parameter '") + key + "' has the wrong type: " + e.what());
  }
}

SmoothMap make_identity(const ManifoldModel& m, const std::string& name, const json& params, double safety) {
  SmoothMap::Definition def;
  def.name = name;
  def.family = Family::Identity;
  def.manifold = m;
  def.lift = [](const Point& x) { return x; };
  const int d = m.dim();
  def.jacobian = [d](const Point&) { return Jacobian(Jacobian::Identity(d, d)); };
  def.affine = true;
  def.params = params;
  SmoothMap::Definition inv = def;
  inv.name = name + "^-1";
  def.inverse = std::make_shared<SmoothMap>(inv, safety);
  return SmoothMap(def, safety);
}

SmoothMap make_rotation(const std::vector<double>& omega, const json& params, double safety) {
  const int d = static_cast<int>(omega.size());
  auto build = [&](double sign, const std::string& name) {
    SmoothMap::Definition def;
    def.name = name;
    def.family = Family::Rotation;
    def.manifold = ManifoldModel::torus(d);
    Point w(d);
    for (int i = 0; i < d; ++i) w(i) = sign * omega[static_cast<std::size_t>(i)];
    def.lift = [w](const Point& x) { return Point(x + w); };
    def.jacobian = [d](const Point&) { return Jacobian(Jacobian::Identity(d, d)); };
    def.affine = true;
    json p = params;
    p["omega"] = std::vector<double>(w.data(), w.data() + d);
    def.params = p;
    return def;
  };
  SmoothMap::Definition def = build(1.0, "rotation");
  def.inverse = std::make_shared<SmoothMap>(build(-1.0, "rotation^-1"), safety);
  return SmoothMap(def, safety);
}

SmoothMap::Definition toral_definition(const IntMatrix& a, const std::string& name) {
  const int d = static_cast<int>(a.rows());
  SmoothMap::Definition def;
  def.name = name;
  def.family = Family::Toral;
  def.manifold = ManifoldModel::torus(d);
  Jacobian ad = a.cast<double>();
  def.lift = [ad](const Point& x) { return Point(ad * x); };
  def.jacobian = [ad](const Point&) { return ad; };
  def.affine = true;
  def.integer_matrix = a;
  std::vector<std::vector<std::int64_t>> rows(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) rows[static_cast<std::size_t>(i)].push_back(a(i, j));
  def.params = json{{"matrix", rows}};
  return def;
}

SmoothMap make_toral(const IntMatrix& a, double safety) {
  if (a.rows() != a.cols() || a.rows() < 1 || a.rows() > kMaxDim) throw Error("toral matrix must be square, size 1..8");
  const std::int64_t det = integer_determinant(a);
  if (det == 0) throw Error("toral endomorphism matrix is singular (determinant 0)");
  SmoothMap::Definition def = toral_definition(a, "toral");
  if (det == 1 || det == -1) {
    Eigen::MatrixXd inv = a.cast<double>().inverse();
    IntMatrix ai = inv.array().round().cast<std::int64_t>().matrix();
    if (a * ai != IntMatrix::Identity(a.rows(), a.cols())) throw Error("failed to invert unimodular matrix exactly");
    def.inverse = std::make_shared<SmoothMap>(toral_definition(ai, "toral^-1"), safety);
  }
  return SmoothMap(def, safety);
}

IntMatrix parse_int_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw Error("'matrix' must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  IntMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw Error("'matrix' must be square");
    for (Eigen::Index k = 0; k < n; ++k) {
      const json& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number_integer()) throw Error("'matrix' entries must be integers");
      m(i, k) = v.get<std::int64_t>();
    }
  }
  return m;
}

}  // namespace

SmoothMap build_system(const std::string& name, const json& params, const CatalogOptions& options) {
  const double safety = options.lipschitz_safety;
  if (name == "identity") {
    check_keys(params, {"dim", "manifold"}, name);
    const int d = param_or<int>(params, "dim", 2);
    const std::string kind = param_or<std::string>(params, "manifold", "torus");
    if (kind == "torus") return make_identity(ManifoldModel::torus(d), name, params, safety);
    if (kind == "cube") return make_identity(ManifoldModel::cube(d, 0.0, 1.0), name, params, safety);
    throw Error("identity: 'manifold' must be 'torus' or 'cube'");
  }
  if (name == "rotation") {
    check_keys(params, {"omega"}, name);
    auto omega = param_or<std::vector<double>>(params, "omega", {std::sqrt(2.0) - 1.0});
    if (omega.empty() || omega.size() > kMaxDim) throw Error("rotation: 'omega' must have 1..8 entries");
    return make_rotation(omega, params, safety);
  }
  if (name == "logistic") {
    check_keys(params, {}, name);
    SmoothMap::Definition def;
    def.name = name;
    def.family = Family::Logistic;
    def.manifold = ManifoldModel::cube(1, 0.0, 1.0);
    def.lift = [](const Point& x) { return make_point({4.0 * x(0) * (1.0 - x(0))}); };
    def.jacobian = [](const Point& x) {
      Jacobian j(1, 1);
      j(0, 0) = 4.0 - 8.0 * x(0);
      return j;
    };
    def.params = params;
    return SmoothMap(def, safety);
  }
  if (name == "quadratic") {
    check_keys(params, {"a"}, name);
    const double a = param_or<double>(params, "a", 2.0);
    if (!(a > 0.0 && a <= 2.0)) throw Error("quadratic: 'a' must lie in (0, 2] to preserve [-1,1]");
    SmoothMap::Definition def;
    def.name = name;
    def.family = Family::Quadratic;
    def.manifold = ManifoldModel::cube(1, -1.0, 1.0);
    def.lift = [a](const Point& x) { return make_point({1.0 - a * x(0) * x(0)}); };
    def.jacobian = [a](const Point& x) {
      Jacobian j(1, 1);
      j(0, 0) = -2.0 * a * x(0);
      return j;
    };
    def.params = json{{"a", a}};
    return SmoothMap(def, safety);
  }
  if (name == "toral") {
    check_keys(params, {"matrix"}, name);
    if (!params.contains("matrix")) throw Error("toral: missing 'matrix'");
    return make_toral(parse_int_matrix(params.at("matrix")), safety);
  }
  if (name == "cat") {
    check_keys(params, {}, name);
    IntMatrix a(2, 2);
    a << 2, 1, 1, 1;
    return make_toral(a, safety);
  }
  if (name == "coupled_quadratic") {
    check_keys(params, {"eps"}, name);
    const double eps = param_or<double>(params, "eps", 0.01);
    if (eps < 0.0)
      throw Error("coupled_quadratic: negative 'eps' pushes 1-1.9y^2-eps*x^2 above 1, so [-1,1]^2 is not preserved");
    if (eps > options.eps_max)
      throw Error("coupled_quadratic: |eps| exceeds eps_max = " + std::to_string(options.eps_max));
    SmoothMap::Definition def;
    def.name = name;
    def.family = Family::CoupledQuadratic;
    def.manifold = ManifoldModel::cube(2, -1.0, 1.0);
    def.lift = [eps](const Point& p) {
      const double x = p(0), y = p(1);
      return make_point({1.0 - 1.8 * x * x - eps * y * y, 1.0 - 1.9 * y * y - eps * x * x});
    };
    def.jacobian = [eps](const Point& p) {
      Jacobian j(2, 2);
      j << -3.6 * p(0), -2.0 * eps * p(1), -2.0 * eps * p(0), -3.8 * p(1);
      return j;
    };
    def.params = json{{"eps", eps}};
    return SmoothMap(def, safety);
  }
  if (name == "f_lambda") {
    check_keys(params, {"lambda", "dim", "sigma"}, name);
    const double lambda = param_or<double>(params, "lambda", 0.0);
    const int d = param_or<int>(params, "dim", 2);
    const double sigma = param_or<double>(params, "sigma", 1.0);
    if (d < 2 || d > kMaxDim) throw Error("f_lambda: 'dim' must be in [2, 8]");
    if (!(sigma > 0.0)) throw Error("f_lambda: 'sigma' must be positive");
    const double h = std::exp(-(lambda * lambda) / (sigma * sigma));
    SmoothMap::Definition def;
    def.name = name;
    def.family = Family::FLambda;
    def.manifold = ManifoldModel::cube(d, 0.0, 1.0);
    def.lift = [h](const Point& x) {
      Point y = x;
      y(0) = h * x(0);
      y(1) = 4.0 * x(0) * x(1) * (1.0 - x(1));
      return y;
    };
    def.jacobian = [h, d](const Point& x) {
      Jacobian j = Jacobian::Identity(d, d);
      j(0, 0) = h;
      j(1, 0) = 4.0 * x(1) * (1.0 - x(1));
      j(1, 1) = 4.0 * x(0) * (1.0 - 2.0 * x(1));
      return j;
    };
    def.params = json{{"lambda", lambda}, {"dim", d}, {"sigma", sigma}, {"h", h}};
    return SmoothMap(def, safety);
  }
  if (name == "circle_logistic_product") {
    check_keys(params, {}, name);
    SmoothMap::Definition def;
    def.name = name;
    def.family = Family::CircleLogisticProduct;
    def.manifold = ManifoldModel::circle_cross_interval(0.0, 1.0);
    def.lift = [](const Point& x) { return make_point({4.0 * x(0), 4.0 * x(1) * (1.0 - x(1))}); };
    def.jacobian = [](const Point& x) {
      Jacobian j(2, 2);
      j << 4.0, 0.0, 0.0, 4.0 - 8.0 * x(1);
      return j;
    };
    def.params = params;
    return SmoothMap(def, safety);
  }
  if (name == "skew_product")
    throw Error("skew_product has no global formula; use the skewlab digit-driven composition");
  throw Error("unknown system '" + name + "'");
}

json catalog_manifest() {
  json systems = json::array();
  auto entry = [&](const char* name, const char* manifold, json params, const char* description) {
    systems.push_back(json{{"name", name}, {"manifold", manifold}, {"params", std::move(params)}, {"description", description}});
  };
  entry("identity", "torus(dim) or cube(dim)",
        json{{"dim", {{"type", "integer"}, {"default", 2}, {"min", 1}, {"max", kMaxDim}}},
             {"manifold", {{"type", "string"}, {"enum", {"torus", "cube"}}, {"default", "torus"}}}},
        "identity map");
  entry("rotation", "torus(len(omega))",
        json{{"omega", {{"type", "array<number>"}, {"default", {std::sqrt(2.0) - 1.0}}}}},
        "rigid rotation x -> x + omega mod 1");
  entry("logistic", "cube [0,1]", json::object(), "x -> 4x(1-x)");
  entry("quadratic", "cube [-1,1]", json{{"a", {{"type", "number"}, {"default", 2.0}, {"exclusive_min", 0.0}, {"max", 2.0}}}},
        "x -> 1 - a x^2");
  entry("toral", "torus(n)", json{{"matrix", {{"type", "array<array<integer>>"}, {"required", true}, {"constraint", "square, det != 0"}}}},
        "linear toral endomorphism x -> A x mod 1");
  entry("cat", "torus(2)", json::object(), "toral automorphism [[2,1],[1,1]]");
  entry("coupled_quadratic", "cube [-1,1]^2", json{{"eps", {{"type", "number"}, {"default", 0.01}, {"min", 0.0}, {"max", "eps_max (0.05)"}}}},
        "(x,y) -> (1-1.8x^2-eps*y^2, 1-1.9y^2-eps*x^2)");
  entry("f_lambda", "cube [0,1]^dim",
        json{{"lambda", {{"type", "number"}, {"default", 0.0}}},
             {"dim", {{"type", "integer"}, {"default", 2}, {"min", 2}, {"max", kMaxDim}}},
             {"sigma", {{"type", "number"}, {"default", 1.0}, {"exclusive_min", 0.0}}}},
        "(x1,x2,...) -> (h(lambda) x1, 4 x1 x2 (1-x2), x3, ...), h(t) = exp(-t^2/sigma^2)");
  entry("circle_logistic_product", "S1 x [0,1]", json::object(), "(theta, x) -> (4 theta mod 1, 4x(1-x))");
  entry("skew_product", "S1 x [0,1]", json::object(), "digit-driven skew product; available through the skewlab subcommand only");
  return json{{"version", 1}, {"systems", systems}};
}

std::vector<Point> iterate(const SmoothMap& f, const Point& x, int n) {
  if (n < 0) throw Error("iterate: n must be >= 0");
  std::vector<Point> orbit;
  orbit.reserve(static_cast<std::size_t>(n) + 1);
  orbit.push_back(f.manifold().canonical(x));
  for (int k = 0; k < n; ++k) orbit.push_back(f.evaluate(orbit.back()));
  return orbit;
}

namespace {

std::uint64_t checked_pow(std::uint64_t base, int n) {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / base) throw Error("periodic count overflows 64 bits");
    r *= base;
  }
  return r;
}

// The n-fold composition of a full unimodal map has 2^n monotone laps, each
// mapped onto the whole interval. Lap boundaries take the values 0 or 1, so
// the only boundary fixed point is x = 0, which belongs to the leftmost lap;
// every lap therefore contributes exactly one fixed point.
std::uint64_t full_unimodal_fixed_points(int n) {
  return checked_pow(2, n);
}

}  // namespace

std::uint64_t count_periodic(const SmoothMap& f, int n) {
  if (n < 1) throw Error("count_periodic: period must be >= 1");
  if (n > 62) throw Error("count_periodic: period too large for exact 64-bit counts");
  switch (f.family()) {
    case Family::Logistic:
      return full_unimodal_fixed_points(n);
    case Family::Quadratic:
      if (f.params().at("a").get<double>() == 2.0) return full_unimodal_fixed_points(n);
      break;
    case Family::Toral: {
      const IntMatrix& a = *f.integer_matrix();
      IntMatrix m = integer_power(a, n) - IntMatrix::Identity(a.rows(), a.cols());
      const std::int64_t det = integer_determinant(m);
      if (det == 0) throw Error("count_periodic: T^n - I is singular, periodic points are not isolated");
      return static_cast<std::uint64_t>(det < 0 ? -det : det);
    }
    case Family::Rotation: {
      const auto omega = f.params().at("omega").get<std::vector<double>>();
      bool all_integer = true;
      for (double w : omega) {
        const double v = n * w;
        all_integer = all_integer && std::abs(v - std::round(v)) < 1e-12;
      }
      if (all_integer) throw Error("count_periodic: rational rotation, every point has period dividing n");
      return 0;
    }
    case Family::CircleLogisticProduct:
      return (checked_pow(4, n) - 1) * full_unimodal_fixed_points(n);
    default:
      break;
  }
  throw Error("count_periodic: no analytic count available for '" + f.name() + "'");
}

}  // namespace dimentropy
