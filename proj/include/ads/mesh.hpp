#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ads/geometry.hpp"

namespace ads {

enum class BoundaryTag : std::uint8_t { Interior = 0, GammaI = 1, GammaO = 2 };

std::string_view to_string(BoundaryTag tag);

/// Cubic-shell lattice parameters. Cells have side 4h with h = 2^-J, the
/// lattice covers [-R/2, R/2]^3, and every cell meeting the open cube
/// (-1/2, 1/2)^3 is removed. For R = 4 this is n = 1/h cells per axis with an
/// (n/4)^3 hole once J >= 3.
struct LatticeSpec {
  int J = 3;
  double outer_radius = 4.0;

  int n() const { return 1 << J; }
  double h() const { return 1.0 / n(); }
};

/// Tetrahedral mesh with derived edges and faces.
///
/// Edges and faces are stored with ascending vertex indices and sorted
/// lexicographically. The edge tangent points from the lower to the higher
/// vertex index; the face normal follows the right-hand rule on the ascending
/// vertex order. Tets are stored with positive signed volume.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> faces;

  std::vector<BoundaryTag> vertex_tag;
  std::vector<BoundaryTag> edge_tag;
  std::vector<BoundaryTag> face_tag;

  /// Global edge index of each local edge (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
  std::vector<std::array<int, 6>> tet_edges;
  /// Global face index of the face opposite local vertex i.
  std::vector<std::array<int, 4>> tet_faces;
  /// Incident tets of each face; second entry is -1 on the boundary.
  std::vector<std::array<int, 2>> face_tets;

  /// Pre-map lattice indices (0..n per axis); empty for meshes not built from a lattice.
  std::vector<std::array<int, 3>> lattice;
  int cells_per_axis = 0;
  double outer_radius = 0.0;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_edges() const { return edges.size(); }
  std::size_t num_faces() const { return faces.size(); }
  std::size_t num_tets() const { return tets.size(); }

  std::array<Vec3, 4> tet_points(std::size_t t) const {
    const auto& c = tets[t];
    return {vertices[c[0]], vertices[c[1]], vertices[c[2]], vertices[c[3]]};
  }

  /// Build connectivity and boundary tags from vertices, tets and vertex tags.
  /// Tets with negative orientation are reordered; degenerate tets throw.
  static Mesh from_tets(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets,
                        std::vector<BoundaryTag> vertex_tag);
};

/// Local vertex pairs of the six tet edges, in the order used by Mesh::tet_edges.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdgeVertices{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Shell mesh between the unit sphere and the sphere of radius spec.outer_radius.
Mesh build_shell_mesh(const LatticeSpec& spec);

/// Exchange GammaI and GammaO on every entity.
Mesh swap_boundary_tags(Mesh mesh);

struct MeshStatistics {
  // [tag][0..3] = vertices, edges, faces, tets. Tets are always Interior.
  std::array<std::array<std::size_t, 4>, 3> counts{};

  std::size_t vertices(BoundaryTag t) const { return counts[static_cast<int>(t)][0]; }
  std::size_t edges(BoundaryTag t) const { return counts[static_cast<int>(t)][1]; }
  std::size_t faces(BoundaryTag t) const { return counts[static_cast<int>(t)][2]; }
  std::size_t total_vertices() const;
  std::size_t total_edges() const;
  std::size_t total_faces() const;
  std::size_t tets = 0;
};

MeshStatistics mesh_statistics(const Mesh& mesh);

}  // namespace ads
