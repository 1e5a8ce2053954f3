#pragma once

#include <functional>
#include <vector>

#include "spfilter/element.hpp"
#include "spfilter/legendre_series.hpp"

namespace spf {

/// Backtracking line-search parameters. The trial step starts at `gamma`
/// and is multiplied by `c` after every rejected trial; `c` also scales the
/// sufficient-decrease slope:
///
///   f(x + g_j p) <= f(x) + g_j c grad f(x)^T p,  g_0 = gamma, g_j = c g_{j-1}
///
/// This is the recurrence as published for the filter, and it makes `c`
/// play both roles; tuned values are c = gamma = 0.7 (2D) and c = 0.2,
/// gamma = 0.7 (3D).
struct LineSearchParams {
  double c = 0.7;
  double gamma = 0.7;
  int max_gd_iters = 200;
  double grad_tolerance = 1e-10;
  /// Number of worst lattice points used as GD seeds (1 = single seed).
  int seeds = 1;

  void validate() const;
};

LineSearchParams default_line_search(int dim);

struct MinResult {
  Point x_star;
  double value = 0.0;
  int gd_iters = 0;
  Point seed_point;
};

/// Smooth objective on a reference element.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double value(const Point& x) const = 0;
  virtual double value_and_gradient(const Point& x, Point& gradient) const = 0;
};

/// Adapts a pair of callables.
class FunctionObjective final : public Objective {
 public:
  using ValueFn = std::function<double(const Point&)>;
  using GradFn = std::function<Point(const Point&)>;

  FunctionObjective(ValueFn value, GradFn gradient)
      : value_(std::move(value)), gradient_(std::move(gradient)) {}

  double value(const Point& x) const override { return value_(x); }
  double value_and_gradient(const Point& x, Point& gradient) const override {
    gradient = gradient_(x);
    return value_(x);
  }

 private:
  ValueFn value_;
  GradFn gradient_;
};

/// Exact global minimum of a polynomial over [lo, hi] ⊆ [-1, 1]: the
/// objective is evaluated at both endpoints and at every real root of its
/// derivative in the interval.
MinResult minimize_1d(const LegendreSeries& objective, double lo = -1.0, double hi = 1.0);

/// Evaluates `objective` at the endpoints and at `candidates`, returning the best.
MinResult minimize_over_candidates(const std::function<double(double)>& objective,
                                   const std::vector<double>& candidates, double lo, double hi);

/// Steepest descent with the backtracking rule above. Iterates stay inside
/// the element: the direction drops components pointing out through active
/// faces and trial points are clamped. Stops when the restricted gradient
/// norm drops below grad_tolerance, the step length collapses below 1e-14,
/// or max_gd_iters steps have been accepted.
MinResult gd_backtracking(const Objective& objective, const Point& seed,
                          const LineSearchParams& params, const ReferenceElement& element);

/// Lattice scan followed by descent from the worst lattice point(s).
/// Returns the better of the lattice minimum and the descent results.
/// Ties prefer the earlier lattice point.
MinResult global_min(const Objective& objective, const std::vector<Point>& lattice,
                     const LineSearchParams& params, const ReferenceElement& element);

/// As above with lattice objective values already computed.
MinResult global_min(const Objective& objective, const std::vector<Point>& lattice,
                     const Eigen::VectorXd& lattice_values, const LineSearchParams& params,
                     const ReferenceElement& element);

/// Descent from each listed lattice index; returns the best of the lattice
/// minimum and all descent results, with gd_iters summed.
MinResult multi_start_min(const Objective& objective, const std::vector<Point>& lattice,
                          const Eigen::VectorXd& lattice_values, const std::vector<int>& seeds,
                          const LineSearchParams& params, const ReferenceElement& element);

}  // namespace spf
