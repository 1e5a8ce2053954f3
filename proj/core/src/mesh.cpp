#include "spfilter/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

namespace spf {

namespace {

using Key = std::array<long long, 3>;

Key centroid_key(const Point& c, double scale) {
  Key key{0, 0, 0};
  for (Eigen::Index k = 0; k < c.size(); ++k) key[k] = std::llround(c[k] / scale * 1e9);
  return key;
}

Point centroid_of(const std::vector<Point>& pts) {
  Point c = Point::Zero(pts.front().size());
  for (const auto& p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

bool same_vertex_set(const std::vector<Point>& a, const std::vector<Point>& b, const Point& shift,
                     double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& p : a) {
    const Point moved = p + shift;
    const bool found = std::any_of(b.begin(), b.end(),
                                   [&](const Point& q) { return (moved - q).norm() <= tol; });
    if (!found) return false;
  }
  return true;
}

}  // namespace

Box make_box(std::initializer_list<double> lower, std::initializer_list<double> upper) {
  if (lower.size() != upper.size()) throw Error("make_box: dimension mismatch");
  Box box{make_point(lower), make_point(upper)};
  if ((box.upper - box.lower).minCoeff() <= 0.0) throw Error("make_box: empty box");
  return box;
}

Box symmetric_box(int dim, double half_width) {
  return Box{Point::Constant(dim, -half_width), Point::Constant(dim, half_width)};
}

Mesh::Mesh(Box box, std::array<bool, 3> periodic) : box_(std::move(box)), periodic_(periodic) {
  if (box_.dim() < 1 || box_.dim() > 3) throw Error("Mesh: dimension must be 1, 2 or 3");
}

int Mesh::add_element(ElementKind kind, std::vector<Point> vertices) {
  if (dimension(kind) != dim()) throw Error("Mesh: element dimension does not match mesh");
  AffineMap map = AffineMap::from_vertices(kind, vertices);
  elements_.push_back(MeshElement{kind, std::move(vertices), std::move(map)});
  faces_.emplace_back(ReferenceElement(kind).faces().size());
  return static_cast<int>(elements_.size()) - 1;
}

std::vector<Point> Mesh::face_vertices(int e, int local_face) const {
  const auto& el = elements_[e];
  const auto& ids = ReferenceElement(el.kind).faces()[local_face];
  std::vector<Point> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(el.vertices[id]);
  return out;
}

Point Mesh::face_normal(int e, int local_face) const {
  const auto verts = face_vertices(e, local_face);
  const auto& el = elements_[e];
  const Point inside = centroid_of(el.vertices);
  const Point on_face = centroid_of(verts);
  const int d = dim();
  Point n(d);
  if (d == 1) {
    n[0] = 1.0;
  } else if (d == 2) {
    const Point t = verts[1] - verts[0];
    n[0] = t[1];
    n[1] = -t[0];
  } else {
    const Eigen::Vector3d a = verts[1] - verts[0];
    const Eigen::Vector3d b = verts.back() - verts[0];
    const Eigen::Vector3d c = a.cross(b);
    n = c;
  }
  n.normalize();
  if (n.dot(on_face - inside) < 0.0) n = -n;
  return n;
}

double Mesh::face_measure(int e, int local_face) const {
  const auto verts = face_vertices(e, local_face);
  const int d = dim();
  if (d == 1) return 1.0;
  if (d == 2) return (verts[1] - verts[0]).norm();
  const Eigen::Vector3d a = verts[1] - verts[0];
  const Eigen::Vector3d b = verts.back() - verts[0];
  const double parallelogram = a.cross(b).norm();
  return verts.size() == 3 ? 0.5 * parallelogram : parallelogram;
}

double Mesh::min_edge_length() const {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& el : elements_) {
    for (std::size_t i = 0; i < el.vertices.size(); ++i) {
      for (std::size_t j = i + 1; j < el.vertices.size(); ++j) {
        h = std::min(h, (el.vertices[i] - el.vertices[j]).norm());
      }
    }
  }
  return h;
}

std::set<ElementKind> Mesh::kinds() const {
  std::set<ElementKind> out;
  for (const auto& el : elements_) out.insert(el.kind);
  return out;
}

void Mesh::connect() {
  const int d = dim();
  const Point extent = box_.extent();
  const double scale = extent.maxCoeff();
  const double tol = 1e-10 * scale;

  std::map<Key, std::vector<std::pair<int, int>>> by_centroid;
  for (int e = 0; e < size(); ++e) {
    for (int f = 0; f < face_count(e); ++f) {
      by_centroid[centroid_key(centroid_of(face_vertices(e, f)), scale)].emplace_back(e, f);
    }
  }

  auto try_match = [&](int e, int f, const Point& shift, bool periodic) {
    const auto verts = face_vertices(e, f);
    const Point target = centroid_of(verts) + shift;
    auto it = by_centroid.find(centroid_key(target, scale));
    if (it == by_centroid.end()) return false;
    for (const auto& [e2, f2] : it->second) {
      if (e2 == e && f2 == f) continue;
      if (!same_vertex_set(verts, face_vertices(e2, f2), shift, tol)) {
        throw Error("Mesh: non-conforming face between elements " + std::to_string(e) +
                    " and " + std::to_string(e2));
      }
      faces_[e][f] = FaceLink{e2, f2, shift, periodic};
      return true;
    }
    return false;
  };

  for (int e = 0; e < size(); ++e) {
    for (int f = 0; f < face_count(e); ++f) {
      faces_[e][f] = FaceLink{-1, -1, Point::Zero(d), false};
      if (try_match(e, f, Point::Zero(d), false)) continue;
      const Point c = centroid_of(face_vertices(e, f));
      for (int k = 0; k < d; ++k) {
        if (!periodic_[k]) continue;
        Point shift = Point::Zero(d);
        if (std::abs(c[k] - box_.upper[k]) <= tol) {
          shift[k] = -extent[k];
        } else if (std::abs(c[k] - box_.lower[k]) <= tol) {
          shift[k] = extent[k];
        } else {
          continue;
        }
        if (try_match(e, f, shift, true)) break;
      }
    }
  }
}

Mesh make_structured_mesh(const Box& box, const std::vector<int>& counts, ElementKind kind,
                          bool periodic) {
  const int d = box.dim();
  if (dimension(kind) != d) throw Error("make_structured_mesh: element kind does not match box");
  if (static_cast<int>(counts.size()) != d) {
    throw Error("make_structured_mesh: need one count per direction");
  }
  for (int c : counts) {
    if (c < 1) throw Error("make_structured_mesh: counts must be positive");
  }
  Mesh mesh(box, {periodic, periodic && d >= 2, periodic && d >= 3});
  const Point h = box.extent().cwiseQuotient(
      Point(Eigen::Map<const Eigen::VectorXi>(counts.data(), d).cast<double>()));

  auto node = [&](int i, int j, int k) {
    Point p(d);
    p[0] = box.lower[0] + i * h[0];
    if (d >= 2) p[1] = box.lower[1] + j * h[1];
    if (d >= 3) p[2] = box.lower[2] + k * h[2];
    return p;
  };

  const int nx = counts[0];
  const int ny = d >= 2 ? counts[1] : 1;
  const int nz = d >= 3 ? counts[2] : 1;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        switch (kind) {
          case ElementKind::Segment:
            mesh.add_element(kind, {node(i, 0, 0), node(i + 1, 0, 0)});
            break;
          case ElementKind::Quad:
            mesh.add_element(kind, {node(i, j, 0), node(i + 1, j, 0), node(i + 1, j + 1, 0),
                                    node(i, j + 1, 0)});
            break;
          case ElementKind::Tri:
            mesh.add_element(kind, {node(i, j, 0), node(i + 1, j, 0), node(i, j + 1, 0)});
            mesh.add_element(kind, {node(i + 1, j + 1, 0), node(i, j + 1, 0), node(i + 1, j, 0)});
            break;
          case ElementKind::Hex:
            mesh.add_element(kind, {node(i, j, k), node(i + 1, j, k), node(i + 1, j + 1, k),
                                    node(i, j + 1, k), node(i, j, k + 1), node(i + 1, j, k + 1),
                                    node(i + 1, j + 1, k + 1), node(i, j + 1, k + 1)});
            break;
          case ElementKind::Tet: {
            // Kuhn subdivision: one tet per ordering of the axis steps along
            // the cell diagonal. Conforming across cells.
            std::array<int, 3> axes{0, 1, 2};
            do {
              std::array<int, 3> idx{i, j, k};
              std::vector<Point> verts{node(idx[0], idx[1], idx[2])};
              for (int axis : axes) {
                idx[axis] += 1;
                verts.push_back(node(idx[0], idx[1], idx[2]));
              }
              const Eigen::Vector3d a = verts[1] - verts[0];
              const Eigen::Vector3d b = verts[2] - verts[0];
              const Eigen::Vector3d c = verts[3] - verts[0];
              if (a.cross(b).dot(c) < 0.0) std::swap(verts[1], verts[2]);
              mesh.add_element(kind, std::move(verts));
            } while (std::next_permutation(axes.begin(), axes.end()));
            break;
          }
        }
      }
    }
  }
  mesh.connect();
  return mesh;
}

Mesh make_composite_mesh(const Box& box, int nx, int ny, const std::set<int>& triangle_rows,
                         bool periodic) {
  if (box.dim() != 2) throw Error("make_composite_mesh: needs a 2D box");
  if (nx < 1 || ny < 1) throw Error("make_composite_mesh: counts must be positive");
  Mesh mesh(box, {periodic, periodic, false});
  const double hx = box.extent()[0] / nx;
  const double hy = box.extent()[1] / ny;
  auto node = [&](int i, int j) {
    return make_point({box.lower[0] + i * hx, box.lower[1] + j * hy});
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (triangle_rows.count(j) != 0) {
        mesh.add_element(ElementKind::Tri, {node(i, j), node(i + 1, j), node(i, j + 1)});
        mesh.add_element(ElementKind::Tri, {node(i + 1, j + 1), node(i, j + 1), node(i + 1, j)});
      } else {
        mesh.add_element(ElementKind::Quad,
                         {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)});
      }
    }
  }
  mesh.connect();
  return mesh;
}

}  // namespace spf
