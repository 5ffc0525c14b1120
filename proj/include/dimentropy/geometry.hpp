#pragma once

// Singular k-disks phi: [-1,1]^k -> M, chart-based C^r sizes, linear
// subdivision and Taylor smoothing.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dimentropy/systems.hpp"

namespace dimentropy {

// Parameter point in Q^k = [-1,1]^k.
using Param = Point;
// d x k matrix of first partial derivatives.
using Tangent = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using MultiIndex = std::vector<int>;

inline constexpr int kInfiniteOrder = -1;
inline constexpr int kMaxFiniteDifferenceOrder = 4;

// Sparse multivariate polynomial with real coefficients.
struct Monomial {
  double coeff = 0.0;
  MultiIndex exponents;
};

class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(int vars, std::vector<Monomial> terms);
  static Polynomial constant(int vars, double c);
  static Polynomial affine(double c, const std::vector<double>& linear);

  int vars() const { return vars_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  int degree() const;
  double operator()(const Param& t) const;
  // Partial derivative of multi-index alpha, evaluated at t.
  double derivative(const Param& t, const MultiIndex& alpha) const;

 private:
  int vars_ = 0;
  std::vector<Monomial> terms_;
};

class SingularDisk {
 public:
  using Eval = std::function<Point(const Param&)>;
  // Analytic partial of multi-index alpha (|alpha| >= 1) at t.
  using Deriv = std::function<Point(const Param&, const MultiIndex&)>;

  struct Spec {
    ManifoldModel manifold;
    int k = 1;
    Eval eval;
    Deriv deriv;
    // Highest order the analytic derivative covers; kInfiniteOrder = all.
    int analytic_order = 0;
    std::string label;
    int gridres = 65;
  };

  explicit SingularDisk(Spec spec);

  static SingularDisk affine(const ManifoldModel& m, const Point& base, const Tangent& a, std::string label = "affine");
  // Straight segment of Euclidean length `length` from base along direction,
  // parameterized at constant speed: phi(t) = base + (t+1)/2 * length * u.
  static SingularDisk segment(const ManifoldModel& m, const Point& base, const Point& direction, double length);
  static SingularDisk polynomial(const ManifoldModel& m, std::vector<Polynomial> coords, std::string label = "polynomial");
  // The d-disk t -> lo + (t+1)/2 (hi - lo) filling the fundamental domain.
  static SingularDisk chart_cube(const ManifoldModel& m);
  static SingularDisk constant(const ManifoldModel& m, int k, const Point& value);

  int k() const { return spec_.k; }
  int dim() const { return spec_.manifold.dim(); }
  const ManifoldModel& manifold() const { return spec_.manifold; }
  const std::string& label() const { return spec_.label; }
  int gridres() const { return spec_.gridres; }
  SingularDisk with_gridres(int gridres) const;
  int analytic_order() const { return spec_.analytic_order; }
  bool has_analytic(int order) const;

  // Coordinates in the covering chart (no wrapping).
  Point lift(const Param& t) const { return spec_.eval(t); }
  Point point(const Param& t) const { return spec_.manifold.canonical(spec_.eval(t)); }

  // Partial derivative; analytic when covered, central differences otherwise.
  Point derivative(const Param& t, const MultiIndex& alpha, double h_fd = 1e-4) const;
  Point finite_difference(const Param& t, const MultiIndex& alpha, double h_fd = 1e-4) const;
  Tangent tangent(const Param& t, double h_fd = 1e-4) const;

  // phi o L with L(t) = center + half .* t (sub-cube inclusion).
  SingularDisk restrict(const Param& center, const Param& half) const;
  // f^m o phi, composed on lifts. First derivatives stay analytic through the
  // chain rule; all orders stay analytic for affine f.
  SingularDisk push_forward(std::shared_ptr<const SmoothMap> f, int m) const;

 private:
  Spec spec_;
};

struct CrSize {
  int r = 0;
  double value = 0.0;
  double c0 = 0.0;  // the r = 0 terms alone
  Param argmax;
  bool analytic = true;  // false if any finite-difference partial was used
};

// Multi-indices of total order between lo and hi in k variables.
std::vector<MultiIndex> multi_indices(int k, int lo, int hi);

// Closed uniform grid on Q^k (boundary included), per_axis >= 2 samples per axis.
std::vector<Param> parameter_grid(int k, int per_axis);

CrSize cr_size(const SingularDisk& phi, int r, ChartConvention convention = ChartConvention::UnitInterval,
               double h_fd = 1e-4, int gridres = 0);

// pieces^k sub-disks in row-major order over the sub-cubes.
std::vector<SingularDisk> subdivide(const SingularDisk& phi, int pieces_per_axis);

struct TaylorResult {
  SingularDisk disk;
  double max_error = 0.0;  // grid sup of distance(phi_inf(t), phi(t))
  double size = 0.0;       // C^r size of phi used in the bound
  double worst_ratio = 0.0;  // max error / (size * |t - t0|_1^r), 0 where undefined
  bool bound_holds = true;
};

// Degree r-1 Taylor polynomial of phi at t0 with an a posteriori check of
// distance <= size * |t - t0|_1^r on the grid.
TaylorResult taylor_smooth(const SingularDisk& phi, int r, const Param& t0, double h_fd = 1e-4);

struct DiskFamily {
  std::string name;
  std::vector<SingularDisk> generators;
  int subdivision_depth = 0;  // closes under pieces = 2^j per axis, j <= depth
  std::vector<double> scalings;  // restrictions to [-s,s]^k
  std::optional<double> size_bound;  // C^r size cap
  int size_order = 1;  // r used for the cap
  bool non_compact = false;  // e.g. unbounded-length segment families
  std::size_t max_members = 4096;
};

struct FamilyMembers {
  std::vector<SingularDisk> members;
  bool truncated = false;
  std::size_t rejected_by_size = 0;
};

FamilyMembers enumerate(const DiskFamily& family, double h_fd = 1e-4);

}  // namespace dimentropy
