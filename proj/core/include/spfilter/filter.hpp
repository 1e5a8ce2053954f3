#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "spfilter/basis.hpp"
#include "spfilter/geometry.hpp"
#include "spfilter/minimize.hpp"

namespace spf {

/// Pointwise linear constraint L_x(u) <= l(x) with L_x(u) = scale * u(x).
///
/// Lower bounds u >= m are stored as -u <= -m. The bound may vary in space
/// (reference coordinates); a spatially varying bound needs its gradient
/// for the descent search.
struct ConstraintFamily {
  double scale = -1.0;
  double bound = 0.0;
  std::function<double(const Point&)> bound_fn;
  std::function<Point(const Point&)> bound_gradient_fn;

  static ConstraintFamily lower_bound(double minimum);
  static ConstraintFamily upper_bound(double maximum);

  bool constant_bound() const { return !bound_fn; }
  double bound_at(const Point& x) const { return bound_fn ? bound_fn(x) : bound; }
  Point bound_gradient_at(const Point& x) const;
};

/// Positivity constraint u >= 0.
inline std::vector<ConstraintFamily> positivity() { return {ConstraintFamily::lower_bound(0.0)}; }

struct FilterConfig {
  /// Numerical zero. A family counts as satisfied when the constraint
  /// residual l(x) - L_x(u) and the scaled distance s(x) are both >= -tolerance.
  double tolerance = 1e-7;
  int max_iterations = 5000;
  LineSearchParams gd;
  /// Stop when |s(x*)| (the size of the correction) stays below
  /// stagnation_step for stagnation_window consecutive iterations.
  int stagnation_window = 10;
  double stagnation_step = 1e-14;
  /// Before declaring convergence, search for violations the
  /// worst-lattice-point descent can miss (on the element boundary and
  /// between lattice points): exact minimization of the constraint residual
  /// along grid lines, refined by exact coordinate descent.
  bool certify = true;

  void validate() const;
};

/// Defaults with the line-search parameters tuned for the given dimension.
FilterConfig default_filter_config(int dim);

struct FilterReport {
  int iterations = 0;
  bool converged = true;
  double final_min_s = 0.0;
  double wall_time = 0.0;  // seconds
  long gd_iterations_total = 0;
};

/// s(x) = lambda(x) (l(x) - L_x(u)), lambda^-2 = sum_j L_x(psi_j)^2.
/// Non-negative where the constraint holds, negative where violated; its
/// magnitude is the Euclidean distance from v to the hyperplane H_x.
double signed_distance(const OrthoBasis& basis, const Coeffs& v, const ConstraintFamily& family,
                       const Point& x);

struct HyperplaneProjection {
  Coeffs v;
  bool applied = false;  // false when s(x*) >= 0 (no-op)
};

/// v <- v + h(x*) min{0, s(x*)} with h = lambda L_x*(psi): the minimum-norm
/// correction putting v on H_x*.
HyperplaneProjection project_onto_hyperplane(const OrthoBasis& basis, const Coeffs& v,
                                             const ConstraintFamily& family, const Point& x_star);

/// s(x) for one family and coefficient vector, with analytic gradient.
class SignedDistanceObjective final : public Objective {
 public:
  SignedDistanceObjective(const OrthoBasis& basis, const Coeffs& v, const ConstraintFamily& family);

  double value(const Point& x) const override;
  double value_and_gradient(const Point& x, Point& gradient) const override;

 private:
  const OrthoBasis& basis_;
  const Coeffs& v_;
  const ConstraintFamily& family_;
  mutable Eigen::VectorXd psi_;
  mutable Eigen::MatrixXd dpsi_;
};

/// Filter bound to one basis, lattice and set of constraint families, with
/// the lattice tables precomputed. Const member functions are thread-safe.
class ElementFilter {
 public:
  ElementFilter(std::shared_ptr<const OrthoBasis> basis, std::vector<ConstraintFamily> families,
                FilterConfig config = {});
  ElementFilter(std::shared_ptr<const OrthoBasis> basis, Lattice lattice,
                std::vector<ConstraintFamily> families, FilterConfig config = {});

  const OrthoBasis& basis() const { return *basis_; }
  const Lattice& lattice() const { return lattice_; }
  const std::vector<ConstraintFamily>& families() const { return families_; }
  const FilterConfig& config() const { return config_; }

  /// Per-family acceptance level for min s: tolerance * min(1, lambda_floor),
  /// where lambda_floor is the smallest lambda over the element.
  double threshold(int family) const { return thresholds_[family]; }

  /// Field values at the lattice points.
  Eigen::VectorXd lattice_values(const Coeffs& v) const;
  /// s at the lattice points for one family.
  Eigen::VectorXd lattice_signed_distance(const Coeffs& v, int family) const;
  /// True when some lattice point has s < -threshold for some family.
  bool violates(const Coeffs& v) const;

  /// Global minimum of s for one family (exact critical-point search on
  /// segments with constant bounds, lattice-seeded descent otherwise).
  /// `thorough` adds the certification search (constant bounds only).
  MinResult minimize(const Coeffs& v, int family, bool thorough = false) const;

  /// Most violated point found along the certification lines, polished by
  /// descent on s. Value is +inf when no line shows a violation.
  MinResult certify(const Coeffs& v, int family) const;

  std::pair<Coeffs, FilterReport> apply(const Coeffs& v) const;

 private:
  void build_certification_lines();

  struct Line {
    Point mid;
    Point half;  // x(t) = mid + t * half, t in [-1, 1]
  };

  std::shared_ptr<const OrthoBasis> basis_;
  Lattice lattice_;
  std::vector<ConstraintFamily> families_;
  FilterConfig config_;
  Eigen::MatrixXd lattice_table_;   // L x P, psi_j at lattice points
  Eigen::VectorXd lattice_norms_;   // ||psi(x_l)||
  std::vector<Eigen::VectorXd> lattice_bounds_;
  std::vector<double> thresholds_;
  std::vector<Line> lines_;
  Eigen::MatrixXd line_table_;  // psi at the Gauss nodes of every line
  Eigen::MatrixXd line_fit_;    // nodal values -> Legendre coefficients
};

/// Greedy farthest-hyperplane projection until every family's global
/// minimum of s is within tolerance.
std::pair<Coeffs, FilterReport> filter_element(const OrthoBasis& basis, const Coeffs& v,
                                               const std::vector<ConstraintFamily>& families,
                                               const FilterConfig& config = {});

/// Elements whose lattice shows s < -threshold for some family.
/// `filters[e]` is the filter for element e's basis.
std::vector<int> flag_elements(const std::vector<Coeffs>& state,
                               const std::vector<const ElementFilter*>& filters);

}  // namespace spf
