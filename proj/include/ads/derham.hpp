#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ads/geometry.hpp"
#include "ads/mesh.hpp"
#include "ads/sparse.hpp"

namespace ads {

enum class Space { Vertex, Edge, Face };

/// Degrees of freedom of the discrete spaces.
///
/// Vertex DoFs are the Interior vertices, edge DoFs every edge not on GammaO,
/// face DoFs every face not on GammaO. Entities keep their mesh order.
///
/// Edge and face DoFs are integral moments: the tangential integral along the
/// edge and the normal flux through the face. The average value the edge or
/// face carries is the moment divided by |e| or |f|.
struct DofMaps {
  std::vector<int> vertex_dof;  // per mesh vertex, -1 when constrained
  std::vector<int> edge_dof;
  std::vector<int> face_dof;
  std::vector<int> vertex_entity;  // per DoF, mesh index
  std::vector<int> edge_entity;
  std::vector<int> face_entity;

  std::vector<double> edge_length;
  std::vector<Vec3> edge_tangent;  // unit, lower to higher vertex index
  std::vector<double> face_area;
  std::vector<Vec3> face_normal;  // unit, right-hand rule on ascending vertices

  std::size_t num_vertex_dofs() const { return vertex_entity.size(); }
  std::size_t num_edge_dofs() const { return edge_entity.size(); }
  std::size_t num_face_dofs() const { return face_entity.size(); }
};

DofMaps enumerate_dofs(const Mesh& mesh);

/// Combinatorial differentials with entries in {-1, 0, +1}.
struct IncidenceMatrices {
  SparseMatrix grad;  // edge DoFs x vertex DoFs
  SparseMatrix curl;  // face DoFs x edge DoFs
};

IncidenceMatrices incidence(const Mesh& mesh, const DofMaps& dofs);

/// curl * grad evaluated with 64-bit integer accumulation; true when every entry is zero.
/// Throws if either matrix holds a non-integer entry.
bool curl_grad_vanishes(const IncidenceMatrices& d);

/// Index of the edge (a, b) in mesh.edges, or -1.
int find_edge(const Mesh& mesh, int a, int b);

/// Whitney basis functions of one tet under the global orientation convention.
///
///   edge (tail, head):      lambda_tail grad lambda_head - lambda_head grad lambda_tail
///   face opposite vertex l: sign (x - x_l) / (3 |K|)
///   vertex i:               lambda_i
///
/// The edge function has unit tangential integral along its edge and the face
/// function has unit flux through its face.
class ElementBasis {
 public:
  ElementBasis(const Mesh& mesh, std::size_t tet);

  const TetGeometry& geometry() const { return geo_; }
  std::size_t tet() const { return tet_; }

  Vec3 edge(int local_edge, const Vec3& x) const;
  Vec3 edge_curl(int local_edge) const;
  Vec3 face(int local_face, const Vec3& x) const;
  double face_divergence(int local_face) const;

  int edge_tail(int local_edge) const { return tail_[local_edge]; }
  int edge_head(int local_edge) const { return head_[local_edge]; }
  int face_sign(int local_face) const { return face_sign_[local_face]; }

 private:
  TetGeometry geo_;
  std::size_t tet_;
  std::array<int, 6> tail_{};
  std::array<int, 6> head_{};
  std::array<int, 4> face_sign_{};
};

using VectorField = std::function<Vec3(const Vec3&)>;
using ScalarField = std::function<double(const Vec3&)>;

/// Tangential moment on every edge DoF, 3-point Gauss-Legendre along the segment.
std::vector<double> interpolate_edge_field(const VectorField& field, const Mesh& mesh, const DofMaps& dofs);
/// Normal flux through every face DoF, 3-point (degree 2) triangle rule.
std::vector<double> interpolate_face_field(const VectorField& field, const Mesh& mesh, const DofMaps& dofs);
/// Nodal values on every vertex DoF.
std::vector<double> interpolate_vertex_field(const ScalarField& field, const Mesh& mesh, const DofMaps& dofs);

/// Point location and evaluation of discrete fields.
class FieldEvaluator {
 public:
  FieldEvaluator(const Mesh& mesh, const DofMaps& dofs);

  /// Tet containing `x` (barycentric tolerance 1e-12), if any.
  std::optional<std::size_t> locate(const Vec3& x) const;

  std::optional<Vec3> edge_field(std::span<const double> coeffs, const Vec3& x) const;
  std::optional<Vec3> face_field(std::span<const double> coeffs, const Vec3& x) const;
  std::optional<double> vertex_field(std::span<const double> coeffs, const Vec3& x) const;

  Vec3 edge_field_in(std::size_t tet, std::span<const double> coeffs, const Vec3& x) const;
  Vec3 face_field_in(std::size_t tet, std::span<const double> coeffs, const Vec3& x) const;
  double vertex_field_in(std::size_t tet, std::span<const double> coeffs, const Vec3& x) const;

 private:
  const Mesh& mesh_;
  const DofMaps& dofs_;
  std::vector<std::array<Vec3, 2>> boxes_;
};

}  // namespace ads
