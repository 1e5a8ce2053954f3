#pragma once

#include <array>
#include <set>
#include <vector>

#include "spfilter/geometry.hpp"

namespace spf {

struct Box {
  Point lower;
  Point upper;

  int dim() const { return static_cast<int>(lower.size()); }
  Point extent() const { return upper - lower; }
};

/// Neighbor record for one local face. `shift` is the translation taking
/// this face's physical points onto the neighbor's (nonzero across a
/// periodic boundary).
struct FaceLink {
  int neighbor = -1;
  int neighbor_face = -1;
  Point shift;
  bool periodic = false;

  bool is_boundary() const { return neighbor < 0; }
};

struct MeshElement {
  ElementKind kind;
  std::vector<Point> vertices;
  AffineMap map;
};

class Mesh {
 public:
  Mesh(Box box, std::array<bool, 3> periodic);

  int dim() const { return box_.dim(); }
  const Box& box() const { return box_; }
  bool periodic(int axis) const { return periodic_[axis]; }

  int add_element(ElementKind kind, std::vector<Point> vertices);

  /// Pairs faces (interior and periodic). Throws if a face matches a
  /// neighbor by centroid but the vertex sets differ (non-conforming).
  void connect();

  int size() const { return static_cast<int>(elements_.size()); }
  const MeshElement& element(int e) const { return elements_[e]; }
  const std::vector<MeshElement>& elements() const { return elements_; }
  const FaceLink& face(int e, int local_face) const { return faces_[e][local_face]; }
  int face_count(int e) const { return static_cast<int>(faces_[e].size()); }

  /// Physical vertices of a local face.
  std::vector<Point> face_vertices(int e, int local_face) const;
  /// Outward unit normal in physical space.
  Point face_normal(int e, int local_face) const;
  /// Length/area of a face (1 for the point faces of a segment).
  double face_measure(int e, int local_face) const;

  /// Shortest element edge; used for CFL estimates.
  double min_edge_length() const;

  std::set<ElementKind> kinds() const;

 private:
  Box box_;
  std::array<bool, 3> periodic_;
  std::vector<MeshElement> elements_;
  std::vector<std::vector<FaceLink>> faces_;
};

/// counts per direction; Segment/Quad/Hex give one element per cell, Tri
/// splits each cell into two, Tet splits each cell into six (Kuhn).
Mesh make_structured_mesh(const Box& box, const std::vector<int>& counts, ElementKind kind,
                          bool periodic = true);

/// nx x ny quads with the listed rows each split into two triangles.
Mesh make_composite_mesh(const Box& box, int nx, int ny, const std::set<int>& triangle_rows,
                         bool periodic = true);

Box make_box(std::initializer_list<double> lower, std::initializer_list<double> upper);
Box symmetric_box(int dim, double half_width = 1.0);

}  // namespace spf
