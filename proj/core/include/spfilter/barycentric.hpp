#pragma once

#include <span>
#include <vector>

#include "spfilter/basis.hpp"

namespace spf {

/// Barycentric weights w_j = 1 / prod_{k != j} (x_j - x_k), scaled so the
/// largest magnitude is one.
Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes);

/// Second-form barycentric interpolation of 1D nodal data.
double barycentric_interpolate(const Eigen::VectorXd& nodes, const Eigen::VectorXd& weights,
                               std::span<const double> values, double x);

/// Tensor-product barycentric interpolation of nodal data on a Gauss grid.
/// Values are ordered like QuadratureRule points (first coordinate fastest).
/// Only valid on Segment/Quad/Hex.
class TensorInterpolator {
 public:
  TensorInterpolator(Eigen::VectorXd nodes, int dim);
  explicit TensorInterpolator(const OrthoBasis& basis);

  int dim() const { return dim_; }
  int points_per_direction() const { return static_cast<int>(nodes_.size()); }

  double evaluate(std::span<const double> nodal, const Point& x) const;

  /// Value and gradient from the same Lagrange factors.
  double evaluate_with_gradient(std::span<const double> nodal, const Point& x,
                                Point& gradient) const;

 private:
  /// Lagrange basis values (and derivatives) at x along one direction.
  void lagrange_row(double x, double* l, double* dl) const;

  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd differentiation_;  // D_ij = l_j'(x_i)
  int dim_;
};

/// Evaluates modal data through nodal values at the basis quadrature grid.
double eval_nodal_barycentric(const TensorInterpolator& interp,
                              std::span<const double> nodal, const Point& x);

}  // namespace spf
