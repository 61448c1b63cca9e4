#pragma once

#include <array>
#include <iosfwd>

#include "ads/derham.hpp"
#include "ads/mesh.hpp"
#include "ads/sparse.hpp"

namespace ads {

/// Degree-2-exact 4-point rule on a tetrahedron, barycentric points.
inline constexpr double kTetQuadA = 0.5854101966249685;
inline constexpr double kTetQuadB = 0.1381966011250105;

struct SystemMatrices {
  SparseMatrix M_v;  // vertex mass
  SparseMatrix M_e;  // edge mass
  SparseMatrix M_f;  // face mass
  SparseMatrix L_v;  // nodal stiffness on vertex DoFs
  SparseMatrix Z_e;  // impedance on edge DoFs
  double gamma = 0.0;
};

SparseMatrix assemble_mass(const Mesh& mesh, const DofMaps& dofs, Space space);

/// grad-grad stiffness restricted to vertex DoFs.
SparseMatrix assemble_stiffness_nodal(const Mesh& mesh, const DofMaps& dofs);

/// grad-grad stiffness over all mesh vertices, used for Dirichlet lifting.
SparseMatrix assemble_stiffness_full(const Mesh& mesh);

/// (1 + gamma) times the L2(GammaI) product of tangential traces of edge basis functions.
SparseMatrix assemble_impedance(const Mesh& mesh, const DofMaps& dofs, double gamma);

SystemMatrices assemble_system(const Mesh& mesh, const DofMaps& dofs, double gamma);

/// Element mass matrices in local ordering (edges per kTetEdgeVertices, faces
/// by opposite vertex), without global DoF restriction.
std::array<std::array<double, 6>, 6> element_edge_mass(const ElementBasis& basis);
std::array<std::array<double, 4>, 4> element_face_mass(const ElementBasis& basis);
std::array<std::array<double, 4>, 4> element_vertex_mass(const ElementBasis& basis);

/// Write every matrix as <dir>/<name>.txt in triplet format.
void dump_matrices(const SystemMatrices& m, const IncidenceMatrices& d, const std::string& dir);

}  // namespace ads
