#pragma once

#include <array>
#include <functional>
#include <vector>

#include "spfilter/element.hpp"
#include "spfilter/quadrature.hpp"

namespace spf {

/// Number of modes for a complete basis of the given order:
/// (N+1)^d on tensor elements, binomial(N+d, d) on simplices.
int basis_size(ElementKind kind, int order);

/// Orthonormal modal basis {psi_j} on a reference element, together with
/// the quadrature rule it was built with and the Vandermonde tables at the
/// quadrature points. Immutable after construction.
///
/// Tensor elements use products of orthonormal Legendre polynomials with
/// mode index j = i + (N+1)*(k + (N+1)*l). Simplices use the collapsed
/// coordinate (Proriol-Koornwinder-Dubiner) family, modes ordered by
/// (i, j[, k]) lexicographically with i+j[+k] <= N.
class OrthoBasis {
 public:
  /// quad_count <= 0 selects order + 2 points per direction.
  OrthoBasis(ElementKind kind, int order, int quad_count = 0);

  ElementKind kind() const { return element_.kind(); }
  const ReferenceElement& element() const { return element_; }
  int dim() const { return element_.dim(); }
  int order() const { return order_; }
  int size() const { return size_; }
  int quad_count() const { return quadrature_.count; }

  const QuadratureRule& quadrature() const { return quadrature_; }
  const std::vector<Point>& quad_points() const { return quadrature_.points; }
  const Eigen::VectorXd& quad_weights() const { return quadrature_.weights; }

  /// P x Q table of psi_j at the quadrature points.
  const Eigen::MatrixXd& vandermonde() const { return vandermonde_; }
  /// P x Q table of d psi_j / d x_direction at the quadrature points.
  const Eigen::MatrixXd& vandermonde_gradient(int direction) const {
    return vandermonde_grad_[direction];
  }

  /// Multi-index of mode j (unused slots are zero).
  const std::array<int, 3>& mode(int j) const { return modes_[j]; }

  /// All psi_j(x). No containment check; x is expected inside the element.
  void evaluate(const Point& x, Eigen::Ref<Eigen::VectorXd> values) const;
  Eigen::VectorXd evaluate(const Point& x) const;

  /// psi_j(x) and the P x d gradient table.
  void evaluate_with_gradient(const Point& x, Eigen::Ref<Eigen::VectorXd> values,
                              Eigen::Ref<Eigen::MatrixXd> gradients) const;

 private:
  void evaluate_impl(const Point& x, Eigen::Ref<Eigen::VectorXd> values,
                     Eigen::Ref<Eigen::MatrixXd> gradients, bool with_gradient) const;
  void evaluate_tensor(const Point& x, Eigen::Ref<Eigen::VectorXd> values,
                       Eigen::Ref<Eigen::MatrixXd> gradients, bool with_gradient) const;
  void evaluate_tri(const Point& x, Eigen::Ref<Eigen::VectorXd> values,
                    Eigen::Ref<Eigen::MatrixXd> gradients, bool with_gradient) const;
  void evaluate_tet(const Point& x, Eigen::Ref<Eigen::VectorXd> values,
                    Eigen::Ref<Eigen::MatrixXd> gradients, bool with_gradient) const;

  ReferenceElement element_;
  int order_;
  int size_;
  QuadratureRule quadrature_;
  std::vector<std::array<int, 3>> modes_;
  Eigen::MatrixXd vandermonde_;
  std::vector<Eigen::MatrixXd> vandermonde_grad_;
};

using ScalarField = std::function<double(const Point&)>;

/// sum_j v_j psi_j(x); throws if x lies outside the element (1e-12 slack).
double eval(const OrthoBasis& basis, const Coeffs& v, const Point& x);

/// Reference-coordinate gradient of sum_j v_j psi_j at x.
Point eval_grad(const OrthoBasis& basis, const Coeffs& v, const Point& x);

/// Discrete L2 projection v_j = sum_q w_q f(x_q) psi_j(x_q) on the reference element.
Coeffs project(const OrthoBasis& basis, const ScalarField& f);

/// Modal coefficients from values at the basis quadrature points (exact for
/// data sampled from a field in the span).
Coeffs nodal_to_modal(const OrthoBasis& basis, const Eigen::VectorXd& nodal);
Eigen::VectorXd modal_to_nodal(const OrthoBasis& basis, const Coeffs& v);

}  // namespace spf
