#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ads/geometry.hpp"
#include "ads/mesh.hpp"

namespace ads {

struct CellVectorField {
  std::string name;
  std::vector<Vec3> values;  // one per tet
};

/// Legacy ASCII VTK unstructured grid (VTK_TETRA cells) with the vertex
/// boundary tag as point data and optional per-cell vectors.
void write_vtk(const Mesh& mesh, std::ostream& out, const std::vector<CellVectorField>& cell_vectors = {});
void write_vtk(const Mesh& mesh, const std::string& path, const std::vector<CellVectorField>& cell_vectors = {});

}  // namespace ads
