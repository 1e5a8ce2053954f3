#include "spfilter/element.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace spf {

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::Segment: return "segment";
    case ElementKind::Quad: return "quad";
    case ElementKind::Tri: return "tri";
    case ElementKind::Hex: return "hex";
    case ElementKind::Tet: return "tet";
  }
  return "unknown";
}

ElementKind element_kind_from_string(std::string_view name) {
  for (auto kind : {ElementKind::Segment, ElementKind::Quad, ElementKind::Tri,
                    ElementKind::Hex, ElementKind::Tet}) {
    if (to_string(kind) == name) return kind;
  }
  throw Error("unsupported element kind '" + std::string(name) + "'");
}

int dimension(ElementKind kind) {
  switch (kind) {
    case ElementKind::Segment: return 1;
    case ElementKind::Quad:
    case ElementKind::Tri: return 2;
    case ElementKind::Hex:
    case ElementKind::Tet: return 3;
  }
  return 0;
}

bool is_tensor_product(ElementKind kind) {
  return kind == ElementKind::Segment || kind == ElementKind::Quad ||
         kind == ElementKind::Hex;
}

bool is_simplex(ElementKind kind) {
  return kind == ElementKind::Tri || kind == ElementKind::Tet;
}

Point make_point(std::initializer_list<double> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p[i++] = c;
  return p;
}

namespace {

// Right-hand side of the slanted face: x+y <= 0 (Tri), x+y+z <= -1 (Tet).
double simplex_sum_bound(ElementKind kind) {
  return kind == ElementKind::Tri ? 0.0 : -1.0;
}

// Barycentric coordinates relative to the reference vertices.
Eigen::VectorXd barycentric(ElementKind kind, const Point& x) {
  const int d = dimension(kind);
  Eigen::VectorXd lam(d + 1);
  // Vertex 0 is (-1,...,-1); vertex k has +1 in coordinate k-1.
  double rest = 1.0;
  for (int k = 0; k < d; ++k) {
    lam[k + 1] = 0.5 * (x[k] + 1.0);
    rest -= lam[k + 1];
  }
  lam[0] = rest;
  return lam;
}

Point from_barycentric(ElementKind kind, const Eigen::VectorXd& lam) {
  const int d = dimension(kind);
  Point x(d);
  for (int k = 0; k < d; ++k) x[k] = 2.0 * lam[k + 1] - 1.0;
  return x;
}

}  // namespace

bool ReferenceElement::contains(const Point& x, double tol) const {
  const int d = dim();
  if (x.size() != d) return false;
  for (int k = 0; k < d; ++k) {
    if (!std::isfinite(x[k]) || x[k] < -1.0 - tol) return false;
    if (is_tensor_product(kind_) && x[k] > 1.0 + tol) return false;
  }
  if (is_simplex(kind_) && x.sum() > simplex_sum_bound(kind_) + tol) return false;
  return true;
}

Point ReferenceElement::clamp(const Point& x) const {
  if (is_tensor_product(kind_)) return x.cwiseMax(-1.0).cwiseMin(1.0);
  Eigen::VectorXd lam = barycentric(kind_, x).cwiseMax(0.0);
  const double total = lam.sum();
  if (total <= 0.0) return centroid();
  lam /= total;
  Point y = from_barycentric(kind_, lam);
  // Guard the last ulp so contains() holds with zero tolerance.
  for (int k = 0; k < dim(); ++k) y[k] = std::max(y[k], -1.0);
  const double excess = y.sum() - simplex_sum_bound(kind_);
  if (excess > 0.0) y.array() -= excess / dim();
  return y;
}

Point ReferenceElement::restrict_direction(const Point& x, const Point& direction,
                                           double active_tol) const {
  const int d = dim();
  Point p = direction;
  // Coordinate faces.
  for (int k = 0; k < d; ++k) {
    if (x[k] <= -1.0 + active_tol && p[k] < 0.0) p[k] = 0.0;
    if (is_tensor_product(kind_) && x[k] >= 1.0 - active_tol && p[k] > 0.0) p[k] = 0.0;
  }
  if (is_simplex(kind_) && x.sum() >= simplex_sum_bound(kind_) - active_tol) {
    const double outward = p.sum();
    if (outward > 0.0) {
      // Project out the slanted-face normal, then re-check coordinate faces.
      p.array() -= outward / d;
      for (int k = 0; k < d; ++k) {
        if (x[k] <= -1.0 + active_tol && p[k] < 0.0) p[k] = 0.0;
      }
      const double again = p.sum();
      if (again > 0.0) {
        int free = 0;
        for (int k = 0; k < d; ++k) free += (x[k] > -1.0 + active_tol) ? 1 : 0;
        if (free == 0) return Point::Zero(d);
        for (int k = 0; k < d; ++k) {
          if (x[k] > -1.0 + active_tol) p[k] -= again / free;
        }
      }
    }
  }
  return p;
}

const std::vector<Point>& ReferenceElement::vertices() const {
  static const std::vector<Point> segment{make_point({-1}), make_point({1})};
  static const std::vector<Point> quad{make_point({-1, -1}), make_point({1, -1}),
                                       make_point({1, 1}), make_point({-1, 1})};
  static const std::vector<Point> tri{make_point({-1, -1}), make_point({1, -1}),
                                      make_point({-1, 1})};
  static const std::vector<Point> hex{
      make_point({-1, -1, -1}), make_point({1, -1, -1}), make_point({1, 1, -1}),
      make_point({-1, 1, -1}),  make_point({-1, -1, 1}), make_point({1, -1, 1}),
      make_point({1, 1, 1}),    make_point({-1, 1, 1})};
  static const std::vector<Point> tet{make_point({-1, -1, -1}), make_point({1, -1, -1}),
                                      make_point({-1, 1, -1}), make_point({-1, -1, 1})};
  switch (kind_) {
    case ElementKind::Segment: return segment;
    case ElementKind::Quad: return quad;
    case ElementKind::Tri: return tri;
    case ElementKind::Hex: return hex;
    case ElementKind::Tet: return tet;
  }
  return segment;
}

const std::vector<std::vector<int>>& ReferenceElement::faces() const {
  static const std::vector<std::vector<int>> segment{{0}, {1}};
  static const std::vector<std::vector<int>> quad{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  static const std::vector<std::vector<int>> tri{{0, 1}, {1, 2}, {2, 0}};
  static const std::vector<std::vector<int>> hex{{0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                                 {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  static const std::vector<std::vector<int>> tet{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  switch (kind_) {
    case ElementKind::Segment: return segment;
    case ElementKind::Quad: return quad;
    case ElementKind::Tri: return tri;
    case ElementKind::Hex: return hex;
    case ElementKind::Tet: return tet;
  }
  return segment;
}

Point ReferenceElement::centroid() const {
  const auto& verts = vertices();
  Point c = Point::Zero(dim());
  for (const auto& v : verts) c += v;
  return c / static_cast<double>(verts.size());
}

double ReferenceElement::volume() const {
  switch (kind_) {
    case ElementKind::Segment: return 2.0;
    case ElementKind::Quad: return 4.0;
    case ElementKind::Tri: return 2.0;
    case ElementKind::Hex: return 8.0;
    case ElementKind::Tet: return 4.0 / 3.0;
  }
  return 0.0;
}

}  // namespace spf
