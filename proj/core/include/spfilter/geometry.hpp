#pragma once

#include <vector>

#include "spfilter/basis.hpp"

namespace spf {

/// Violation-detection points on a reference element: the quadrature grid
/// followed by the centroids of adjacent grid cells (the staggered grid).
struct Lattice {
  ElementKind kind = ElementKind::Segment;
  std::vector<Point> points;
  int grid_count = 0;  // leading entries that are quadrature points
};

/// Q^d quadrature points plus (Q-1)^d cell centroids. On simplices the cells
/// are taken in collapsed-index space, so each centroid averages the 2^d
/// mapped quadrature points of one collapsed cell.
Lattice build_lattice(const OrthoBasis& basis);

/// x = origin + J * xi. Element vertices v_k map from reference vertices.
class AffineMap {
 public:
  AffineMap() = default;
  AffineMap(Point origin, Eigen::MatrixXd jacobian);

  /// Builds the map for an element from its physical vertices (same order
  /// as ReferenceElement::vertices()). Throws for degenerate or inverted
  /// elements and for quads/hexes that are not parallelepipeds.
  static AffineMap from_vertices(ElementKind kind, const std::vector<Point>& vertices);

  Point to_physical(const Point& reference) const;
  Point to_reference(const Point& physical) const;

  const Eigen::MatrixXd& jacobian() const { return jacobian_; }
  const Eigen::MatrixXd& inverse_jacobian() const { return inverse_; }
  double determinant() const { return determinant_; }
  const Point& origin() const { return origin_; }

 private:
  Point origin_;
  Eigen::MatrixXd jacobian_;
  Eigen::MatrixXd inverse_;
  double determinant_ = 0.0;
};

}  // namespace spf
