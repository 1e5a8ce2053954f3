#include "spfilter/geometry.hpp"

#include <cmath>
#include <string>

namespace spf {

Lattice build_lattice(const OrthoBasis& basis) {
  const int q = basis.quad_count();
  if (q < 2) throw Error("build_lattice: need at least two quadrature points per direction");
  const int d = basis.dim();
  const auto& points = basis.quad_points();

  Lattice lattice;
  lattice.kind = basis.kind();
  lattice.points = points;
  lattice.grid_count = static_cast<int>(points.size());

  const int nj = d >= 2 ? q - 1 : 1;
  const int nk = d >= 3 ? q - 1 : 1;
  const int corners = 1 << d;
  for (int k = 0; k < nk; ++k) {
    for (int j = 0; j < nj; ++j) {
      for (int i = 0; i < q - 1; ++i) {
        Point centroid = Point::Zero(d);
        for (int corner = 0; corner < corners; ++corner) {
          const int ii = i + (corner & 1);
          const int jj = d >= 2 ? j + ((corner >> 1) & 1) : 0;
          const int kk = d >= 3 ? k + ((corner >> 2) & 1) : 0;
          centroid += points[ii + q * (jj + q * kk)];
        }
        lattice.points.push_back(centroid / corners);
      }
    }
  }
  return lattice;
}

AffineMap::AffineMap(Point origin, Eigen::MatrixXd jacobian)
    : origin_(std::move(origin)), jacobian_(std::move(jacobian)) {
  determinant_ = jacobian_.determinant();
  if (!(std::abs(determinant_) > 0.0) || !std::isfinite(determinant_)) {
    throw Error("AffineMap: singular element map");
  }
  inverse_ = jacobian_.inverse();
}

AffineMap AffineMap::from_vertices(ElementKind kind, const std::vector<Point>& vertices) {
  const ReferenceElement ref(kind);
  const auto& ref_vertices = ref.vertices();
  if (vertices.size() != ref_vertices.size()) {
    throw Error("AffineMap: element " + std::string(to_string(kind)) + " needs " +
                std::to_string(ref_vertices.size()) + " vertices");
  }
  const int d = ref.dim();
  // Reference vertex 0 is (-1,...,-1); pick one vertex per axis direction.
  std::vector<int> axis_vertex;
  switch (kind) {
    case ElementKind::Segment: axis_vertex = {1}; break;
    case ElementKind::Quad: axis_vertex = {1, 3}; break;
    case ElementKind::Tri: axis_vertex = {1, 2}; break;
    case ElementKind::Hex: axis_vertex = {1, 3, 4}; break;
    case ElementKind::Tet: axis_vertex = {1, 2, 3}; break;
  }
  Eigen::MatrixXd jac(d, d);
  for (int k = 0; k < d; ++k) {
    jac.col(k) = 0.5 * (vertices[axis_vertex[k]] - vertices[0]);
  }
  const Point origin = vertices[0] + jac * Point::Ones(d);
  AffineMap map(origin, jac);
  if (map.determinant() <= 0.0) {
    throw Error("AffineMap: element vertices are inverted (negative Jacobian)");
  }
  const double scale = jac.cwiseAbs().maxCoeff();
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if ((map.to_physical(ref_vertices[v]) - vertices[v]).norm() > 1e-10 * (1.0 + scale)) {
      throw Error("AffineMap: element is not an affine image of the reference " +
                  std::string(to_string(kind)));
    }
  }
  return map;
}

Point AffineMap::to_physical(const Point& reference) const {
  return origin_ + jacobian_ * reference;
}

Point AffineMap::to_reference(const Point& physical) const {
  return inverse_ * (physical - origin_);
}

}  // namespace spf
