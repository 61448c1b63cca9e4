#include "ads/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace ads {

namespace {

void put_vec(std::ostream& out, const Vec3& v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v[0], v[1], v[2]);
  out << buf;
}

}  // namespace

void write_vtk(const Mesh& mesh, std::ostream& out, const std::vector<CellVectorField>& cell_vectors) {
  out << "# vtk DataFile Version 3.0\n";
  out << "shell mesh between the unit sphere and radius " << mesh.outer_radius << "\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& x : mesh.vertices) put_vec(out, x);

  out << "CELLS " << mesh.num_tets() << ' ' << 5 * mesh.num_tets() << '\n';
  for (const auto& t : mesh.tets) out << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  out << "CELL_TYPES " << mesh.num_tets() << '\n';
  for (std::size_t i = 0; i < mesh.num_tets(); ++i) out << "10\n";

  out << "POINT_DATA " << mesh.num_vertices() << '\n';
  out << "SCALARS boundary_tag int 1\nLOOKUP_TABLE default\n";
  for (auto tag : mesh.vertex_tag) out << static_cast<int>(tag) << '\n';

  if (!cell_vectors.empty()) {
    out << "CELL_DATA " << mesh.num_tets() << '\n';
    for (const auto& field : cell_vectors) {
      if (field.values.size() != mesh.num_tets())
        throw std::invalid_argument("cell field " + field.name + " has the wrong length");
      out << "VECTORS " << field.name << " double\n";
      for (const auto& v : field.values) put_vec(out, v);
    }
  }
}

void write_vtk(const Mesh& mesh, const std::string& path, const std::vector<CellVectorField>& cell_vectors) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_vtk(mesh, out, cell_vectors);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ads
