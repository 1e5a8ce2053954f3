#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace spf {

/// Points in reference or physical space; at most three coordinates, no heap.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using Coeffs = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ElementKind { Segment, Quad, Tri, Hex, Tet };

std::string_view to_string(ElementKind kind);
ElementKind element_kind_from_string(std::string_view name);

int dimension(ElementKind kind);
bool is_tensor_product(ElementKind kind);
bool is_simplex(ElementKind kind);

/// Reference domains:
///   Segment  [-1,1]
///   Quad/Hex [-1,1]^d
///   Tri      {x,y >= -1, x+y <= 0}
///   Tet      {x,y,z >= -1, x+y+z <= -1}
class ReferenceElement {
 public:
  explicit ReferenceElement(ElementKind kind) : kind_(kind) {}

  ElementKind kind() const { return kind_; }
  int dim() const { return dimension(kind_); }

  bool contains(const Point& x, double tol = 1e-12) const;

  /// Nearest-ish point inside the element: box clamp for tensor elements,
  /// barycentric clamp (clip negative coordinates, renormalize) for simplices.
  Point clamp(const Point& x) const;

  /// Removes components of `direction` that would leave the element through
  /// any face active at `x`.
  Point restrict_direction(const Point& x, const Point& direction,
                           double active_tol = 1e-13) const;

  const std::vector<Point>& vertices() const;
  Point centroid() const;
  double volume() const;

  /// Local faces as lists of vertex indices (ordered around the face).
  const std::vector<std::vector<int>>& faces() const;

 private:
  ElementKind kind_;
};

Point make_point(std::initializer_list<double> coords);

}  // namespace spf
