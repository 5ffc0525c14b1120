#pragma once

// Model manifolds, smooth self-maps and the catalog of concrete systems.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace dimentropy {

inline constexpr int kMaxDim = 8;

// Small fixed-capacity vectors and matrices: points of the model manifolds
// never exceed kMaxDim coordinates, so no heap traffic in orbit loops.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Jacobian = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Point make_point(std::initializer_list<double> coords);

enum class AxisKind { Circle, Interval };

struct Axis {
  AxisKind kind = AxisKind::Interval;
  double lo = 0.0;  // circles are always [0,1)
  double hi = 1.0;
};

// Which fundamental domain a circle coordinate is reported in when a chart
// coordinate (not a distance) is needed, e.g. for the C^0 part of a C^r size.
enum class ChartConvention { UnitInterval, Centered };

class ManifoldModel {
 public:
  enum class Kind { Torus, Cube, CircleCrossInterval };

  static ManifoldModel torus(int d);
  static ManifoldModel cube(int d, double lo, double hi);
  static ManifoldModel cube(std::vector<std::pair<double, double>> bounds);
  static ManifoldModel circle_cross_interval(double lo = 0.0, double hi = 1.0);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int i) const { return axes_[static_cast<std::size_t>(i)]; }
  std::string describe() const;

  double axis_distance(int i, double a, double b) const;
  // Max over axes of the per-axis distance.
  double distance(const Point& x, const Point& y) const;
  // Wraps circle coordinates into [0,1) and clamps interval coordinates
  // (clamping only absorbs rounding; maps are required to preserve bounds).
  Point canonical(Point x) const;
  bool is_canonical(const Point& x) const;
  double chart_coordinate(int i, double x, ChartConvention convention) const;

 private:
  Kind kind_ = Kind::Cube;
  std::vector<Axis> axes_;
};

enum class Family {
  Identity,
  Rotation,
  Logistic,
  Quadratic,
  Toral,
  CoupledQuadratic,
  FLambda,
  CircleLogisticProduct,
};

std::string to_string(Family f);

struct Smoothness {
  bool infinite = true;
  int r = 0;  // meaningful only when !infinite
};

class SmoothMap {
 public:
  struct Definition {
    std::string name;
    Family family = Family::Identity;
    ManifoldModel manifold;
    // Evaluation in covering/chart coordinates, without canonicalization.
    // For torus maps this is the lift to R^d.
    std::function<Point(const Point&)> lift;
    std::function<Jacobian(const Point&)> jacobian;
    Smoothness smoothness;
    bool affine = false;
    std::shared_ptr<const SmoothMap> inverse;
    nlohmann::json params = nlohmann::json::object();
    std::optional<IntMatrix> integer_matrix;
  };

  SmoothMap(Definition def, double lipschitz_safety = 1.05, int lipschitz_grid = 0);

  const std::string& name() const { return def_.name; }
  Family family() const { return def_.family; }
  const ManifoldModel& manifold() const { return def_.manifold; }
  int dim() const { return def_.manifold.dim(); }
  Smoothness smoothness() const { return def_.smoothness; }
  bool affine() const { return def_.affine; }
  const nlohmann::json& params() const { return def_.params; }
  const std::optional<IntMatrix>& integer_matrix() const { return def_.integer_matrix; }

  Point evaluate(const Point& x) const { return def_.manifold.canonical(def_.lift(x)); }
  Point operator()(const Point& x) const { return evaluate(x); }
  Point lift(const Point& x) const { return def_.lift(x); }
  Jacobian jacobian(const Point& x) const { return def_.jacobian(x); }

  bool invertible() const { return static_cast<bool>(def_.inverse); }
  const SmoothMap& inverse() const;
  std::shared_ptr<const SmoothMap> inverse_ptr() const { return def_.inverse; }

  // Grid sup of the max-norm operator norm of the Jacobian, times the safety factor.
  double lipschitz() const { return lipschitz_; }
  // max(log Lip, 0)
  double lip() const;
  double lipschitz_safety() const { return safety_; }

 private:
  Definition def_;
  double lipschitz_ = 1.0;
  double safety_ = 1.05;
};

// Operator norm induced by the max norm (max absolute row sum).
double max_norm_operator(const Jacobian& j);

// Uniform grid over the manifold's fundamental domain, per_axis samples per
// axis at cell midpoints.
std::vector<Point> manifold_grid(const ManifoldModel& m, int per_axis);

struct CatalogOptions {
  double eps_max = 0.05;
  double lipschitz_safety = 1.05;
};

SmoothMap build_system(const std::string& name, const nlohmann::json& params = nlohmann::json::object(),
                       const CatalogOptions& options = {});

// Machine-readable list of catalog names and their parameter schemas.
nlohmann::json catalog_manifest();

// orbit[0] = x, orbit[k+1] = f(orbit[k]); n+1 points.
std::vector<Point> iterate(const SmoothMap& f, const Point& x, int n);

// Exact number of solutions of f^n x = x for the supported families.
std::uint64_t count_periodic(const SmoothMap& f, int n);

// Exact determinant of an integer matrix (Bareiss elimination).
std::int64_t integer_determinant(const IntMatrix& m);
IntMatrix integer_power(const IntMatrix& m, int n);

// h = sum of log|eigenvalue| over eigenvalues outside the unit circle.
double toral_entropy(const IntMatrix& m);

}  // namespace dimentropy
