#pragma once

#include <functional>
#include <string>

#include "spfilter/mesh.hpp"

namespace spf {

/// Field value on element `e` at a reference point.
using ElementField = std::function<double(int e, const Point& reference)>;

/// Legacy ASCII VTK unstructured grid with one cell per element.
void write_mesh_vtk(const std::string& path, const Mesh& mesh);

/// Legacy ASCII VTK with a point field. Segments, quads, hexes and triangles
/// are subdivided `subdivisions` times per edge so the polynomial shape is
/// visible; tetrahedra are written with their four vertices. Points are not
/// shared between elements (the field is discontinuous).
void write_field_vtk(const std::string& path, const Mesh& mesh, const ElementField& field,
                     const std::string& field_name = "u", int subdivisions = 4);

}  // namespace spf
