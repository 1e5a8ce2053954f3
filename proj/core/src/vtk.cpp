#include "spfilter/vtk.hpp"

#include <fstream>
#include <iomanip>
#include <vector>

namespace spf {

namespace {

constexpr int kVtkLine = 3;
constexpr int kVtkTriangle = 5;
constexpr int kVtkQuad = 9;
constexpr int kVtkTetra = 10;
constexpr int kVtkHexahedron = 12;

struct Cell {
  int type;
  std::vector<int> ids;
};

struct Sampling {
  std::vector<Point> reference;  // per element, relative ordering
  std::vector<Cell> cells;       // ids into `reference`
};

Sampling sample_element(ElementKind kind, int m) {
  Sampling s;
  auto coord = [m](int i) { return -1.0 + 2.0 * i / m; };
  switch (kind) {
    case ElementKind::Segment:
      for (int i = 0; i <= m; ++i) s.reference.push_back(make_point({coord(i)}));
      for (int i = 0; i < m; ++i) s.cells.push_back({kVtkLine, {i, i + 1}});
      break;
    case ElementKind::Quad: {
      auto id = [m](int i, int j) { return i + (m + 1) * j; };
      for (int j = 0; j <= m; ++j)
        for (int i = 0; i <= m; ++i) s.reference.push_back(make_point({coord(i), coord(j)}));
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
          s.cells.push_back({kVtkQuad, {id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)}});
      break;
    }
    case ElementKind::Hex: {
      auto id = [m](int i, int j, int k) { return i + (m + 1) * (j + (m + 1) * k); };
      for (int k = 0; k <= m; ++k)
        for (int j = 0; j <= m; ++j)
          for (int i = 0; i <= m; ++i)
            s.reference.push_back(make_point({coord(i), coord(j), coord(k)}));
      for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j)
          for (int i = 0; i < m; ++i)
            s.cells.push_back({kVtkHexahedron,
                               {id(i, j, k), id(i + 1, j, k), id(i + 1, j + 1, k), id(i, j + 1, k),
                                id(i, j, k + 1), id(i + 1, j, k + 1), id(i + 1, j + 1, k + 1),
                                id(i, j + 1, k + 1)}});
      break;
    }
    case ElementKind::Tri: {
      std::vector<std::vector<int>> id(m + 1, std::vector<int>(m + 1, -1));
      for (int j = 0; j <= m; ++j) {
        for (int i = 0; i + j <= m; ++i) {
          id[i][j] = static_cast<int>(s.reference.size());
          s.reference.push_back(make_point({coord(i), coord(j)}));
        }
      }
      for (int j = 0; j < m; ++j) {
        for (int i = 0; i + j < m; ++i) {
          s.cells.push_back({kVtkTriangle, {id[i][j], id[i + 1][j], id[i][j + 1]}});
          if (i + j + 1 < m) {
            s.cells.push_back({kVtkTriangle, {id[i + 1][j], id[i + 1][j + 1], id[i][j + 1]}});
          }
        }
      }
      break;
    }
    case ElementKind::Tet:
      s.reference = ReferenceElement(kind).vertices();
      s.cells.push_back({kVtkTetra, {0, 1, 2, 3}});
      break;
  }
  return s;
}

void write_points(std::ofstream& out, const std::vector<Point>& pts) {
  out << "POINTS " << pts.size() << " double\n";
  for (const auto& p : pts) {
    out << p[0] << ' ' << (p.size() > 1 ? p[1] : 0.0) << ' ' << (p.size() > 2 ? p[2] : 0.0)
        << '\n';
  }
}

void write_cells(std::ofstream& out, const std::vector<Cell>& cells) {
  std::size_t total = 0;
  for (const auto& c : cells) total += c.ids.size() + 1;
  out << "CELLS " << cells.size() << ' ' << total << '\n';
  for (const auto& c : cells) {
    out << c.ids.size();
    for (int id : c.ids) out << ' ' << id;
    out << '\n';
  }
  out << "CELL_TYPES " << cells.size() << '\n';
  for (const auto& c : cells) out << c.type << '\n';
}

std::ofstream open_vtk(const std::string& path, const std::string& title) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << std::setprecision(12);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  return out;
}

int cell_type(ElementKind kind) {
  switch (kind) {
    case ElementKind::Segment: return kVtkLine;
    case ElementKind::Quad: return kVtkQuad;
    case ElementKind::Tri: return kVtkTriangle;
    case ElementKind::Hex: return kVtkHexahedron;
    case ElementKind::Tet: return kVtkTetra;
  }
  return kVtkLine;
}

}  // namespace

void write_mesh_vtk(const std::string& path, const Mesh& mesh) {
  auto out = open_vtk(path, "spfilter mesh");
  std::vector<Point> pts;
  std::vector<Cell> cells;
  for (const auto& el : mesh.elements()) {
    Cell cell{cell_type(el.kind), {}};
    for (const auto& v : el.vertices) {
      cell.ids.push_back(static_cast<int>(pts.size()));
      pts.push_back(v);
    }
    cells.push_back(std::move(cell));
  }
  write_points(out, pts);
  write_cells(out, cells);
  out << "CELL_DATA " << cells.size() << "\nSCALARS element_id int 1\nLOOKUP_TABLE default\n";
  for (int e = 0; e < mesh.size(); ++e) out << e << '\n';
}

void write_field_vtk(const std::string& path, const Mesh& mesh, const ElementField& field,
                     const std::string& field_name, int subdivisions) {
  if (subdivisions < 1) throw Error("write_field_vtk: subdivisions must be positive");
  auto out = open_vtk(path, "spfilter field");
  std::vector<Point> pts;
  std::vector<double> values;
  std::vector<Cell> cells;
  for (int e = 0; e < mesh.size(); ++e) {
    const auto& el = mesh.element(e);
    const Sampling s = sample_element(el.kind, subdivisions);
    const int offset = static_cast<int>(pts.size());
    for (const auto& ref : s.reference) {
      pts.push_back(el.map.to_physical(ref));
      values.push_back(field(e, ref));
    }
    for (auto cell : s.cells) {
      for (int& id : cell.ids) id += offset;
      cells.push_back(std::move(cell));
    }
  }
  write_points(out, pts);
  write_cells(out, cells);
  out << "POINT_DATA " << pts.size() << "\nSCALARS " << field_name
      << " double 1\nLOOKUP_TABLE default\n";
  for (double v : values) out << v << '\n';
}

}  // namespace spf
