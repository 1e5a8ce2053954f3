#pragma once

#include <vector>

#include "spfilter/element.hpp"

namespace spf {

struct Rule1D {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Gauss-Jacobi rule with `count` nodes for the weight (1-x)^alpha (1+x)^beta.
/// Exact for polynomials of degree <= 2*count-1 against that weight.
Rule1D gauss_jacobi(int count, double alpha = 0.0, double beta = 0.0);

inline Rule1D gauss_legendre(int count) { return gauss_jacobi(count, 0.0, 0.0); }

/// Quadrature on a reference element. Tensor elements use Gauss-Legendre per
/// direction; simplices use collapsed coordinates with Gauss-Jacobi (alpha=1,
/// then alpha=2 on the third direction) so that `count` points per direction
/// integrate polynomials of total degree <= 2*count-1 exactly.
///
/// Points are stored direction-major with the first coordinate (collapsed
/// `a` for simplices) varying fastest: index = i + count*(j + count*k).
struct QuadratureRule {
  ElementKind kind = ElementKind::Segment;
  int count = 0;  // points per direction
  std::vector<Point> points;
  Eigen::VectorXd weights;
  /// Collapsed coordinates for simplices, reference coordinates otherwise.
  std::vector<Point> collapsed;
};

QuadratureRule make_quadrature(ElementKind kind, int count);

/// Maps collapsed coordinates (a,b[,c]) in [-1,1]^d to the reference simplex.
Point collapsed_to_reference(ElementKind kind, const Point& collapsed);

/// Inverse of collapsed_to_reference; the singular vertex maps to a = -1 (and b = -1).
Point reference_to_collapsed(ElementKind kind, const Point& x);

}  // namespace spf
