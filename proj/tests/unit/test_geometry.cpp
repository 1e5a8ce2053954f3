#include <doctest.h>

#include <random>

#include <spfilter/geometry.hpp>
#include <spfilter/mesh.hpp>

using namespace spf;

TEST_SUITE("geometry") {

TEST_CASE("lattice sizes") {
  CHECK(build_lattice(OrthoBasis(ElementKind::Quad, 1, 3)).points.size() == 13);
  CHECK(build_lattice(OrthoBasis(ElementKind::Segment, 2, 4)).points.size() == 7);
  CHECK(build_lattice(OrthoBasis(ElementKind::Hex, 1, 3)).points.size() == 35);
  const Lattice tri = build_lattice(OrthoBasis(ElementKind::Tri, 2, 4));
  CHECK(tri.points.size() == 16 + 9);
  CHECK(tri.grid_count == 16);
}

TEST_CASE("lattice = quadrature grid followed by cell centroids") {
  OrthoBasis b(ElementKind::Quad, 2, 4);
  const Lattice lattice = build_lattice(b);
  for (int q = 0; q < 16; ++q) CHECK((lattice.points[q] - b.quad_points()[q]).norm() == 0.0);
  // First centroid averages the four corner-adjacent grid points.
  const Point expected = 0.25 * (b.quad_points()[0] + b.quad_points()[1] + b.quad_points()[4] +
                                 b.quad_points()[5]);
  CHECK((lattice.points[16] - expected).norm() < 1e-15);

  for (ElementKind kind : {ElementKind::Tri, ElementKind::Tet}) {
    const OrthoBasis sb(kind, 3);
    for (const auto& x : build_lattice(sb).points) CHECK(sb.element().contains(x));
  }
}

TEST_CASE("affine maps") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<Point> tri = {make_point({0.0, 0.0}), make_point({2.0, 0.5}),
                                  make_point({0.3, 1.5})};
  const AffineMap map = AffineMap::from_vertices(ElementKind::Tri, tri);
  const ReferenceElement ref(ElementKind::Tri);
  for (int k = 0; k < 3; ++k) CHECK((map.to_physical(ref.vertices()[k]) - tri[k]).norm() < 1e-14);
  CHECK((map.to_physical(ref.centroid()) - (tri[0] + tri[1] + tri[2]) / 3.0).norm() < 1e-14);
  for (int trial = 0; trial < 20; ++trial) {
    const Point x = make_point({u(rng), u(rng)});
    CHECK((map.to_reference(map.to_physical(x)) - x).norm() < 1e-13);
  }

  const std::vector<Point> inverted = {tri[0], tri[2], tri[1]};
  CHECK_THROWS_AS(AffineMap::from_vertices(ElementKind::Tri, inverted), Error);
  const std::vector<Point> crooked = {make_point({-1, -1}), make_point({1, -1}),
                                      make_point({1.2, 1}), make_point({-1, 1})};
  CHECK_THROWS_AS(AffineMap::from_vertices(ElementKind::Quad, crooked), Error);
}

TEST_CASE("structured mesh element counts") {
  CHECK(make_structured_mesh(symmetric_box(2), {2, 2}, ElementKind::Quad).size() == 4);
  CHECK(make_structured_mesh(symmetric_box(3), {4, 4, 4}, ElementKind::Hex).size() == 64);
  CHECK(make_structured_mesh(symmetric_box(3), {3, 3, 3}, ElementKind::Tet).size() == 162);
  CHECK(make_structured_mesh(symmetric_box(3), {3, 3, 3}, ElementKind::Hex).size() == 27);
  const Mesh composite = make_composite_mesh(symmetric_box(2), 4, 4, {1, 2});
  CHECK(composite.size() == 24);
  int tris = 0;
  for (const auto& e : composite.elements()) tris += e.kind == ElementKind::Tri;
  CHECK(tris == 16);
}

TEST_CASE("face links are involutions with opposite normals") {
  for (const Mesh& mesh : {make_composite_mesh(symmetric_box(2), 4, 4, {1, 2}),
                           make_structured_mesh(symmetric_box(3), {2, 2, 2}, ElementKind::Tet)}) {
    double total_volume = 0.0;
    for (int e = 0; e < mesh.size(); ++e) {
      total_volume += std::abs(mesh.element(e).map.determinant()) *
                      ReferenceElement(mesh.element(e).kind).volume();
      for (int f = 0; f < mesh.face_count(e); ++f) {
        const FaceLink& link = mesh.face(e, f);
        REQUIRE_FALSE(link.is_boundary());
        const FaceLink& back = mesh.face(link.neighbor, link.neighbor_face);
        CHECK(back.neighbor == e);
        CHECK(back.neighbor_face == f);
        CHECK((back.shift + link.shift).norm() < 1e-14);
        const Point back_normal = mesh.face_normal(link.neighbor, link.neighbor_face);
        CHECK((mesh.face_normal(e, f) + back_normal).norm() < 1e-13);
      }
    }
    CHECK(total_volume == doctest::Approx(std::pow(2.0, mesh.dim())));
  }
}

TEST_CASE("non-periodic boxes keep boundary faces") {
  const Mesh mesh = make_structured_mesh(symmetric_box(2), {2, 1}, ElementKind::Quad, false);
  int boundary = 0;
  for (int e = 0; e < mesh.size(); ++e)
    for (int f = 0; f < mesh.face_count(e); ++f) boundary += mesh.face(e, f).is_boundary();
  CHECK(boundary == 6);
}

}  // TEST_SUITE
