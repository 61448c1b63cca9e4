#include "ads/assembly.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace ads {

namespace {

std::array<Vec3, 4> quadrature_points(const TetGeometry& g) {
  std::array<Vec3, 4> pts{};
  for (int q = 0; q < 4; ++q) {
    Vec3 x{0.0, 0.0, 0.0};
    for (int i = 0; i < 4; ++i) x += (i == q ? kTetQuadA : kTetQuadB) * g.x[i];
    pts[q] = x;
  }
  return pts;
}

}  // namespace

std::array<std::array<double, 6>, 6> element_edge_mass(const ElementBasis& basis) {
  const auto& g = basis.geometry();
  const auto pts = quadrature_points(g);
  std::array<std::array<double, 6>, 6> m{};
  for (const auto& x : pts) {
    std::array<Vec3, 6> w;
    for (int e = 0; e < 6; ++e) w[e] = basis.edge(e, x);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) m[i][j] += 0.25 * g.volume * dot(w[i], w[j]);
  }
  return m;
}

std::array<std::array<double, 4>, 4> element_face_mass(const ElementBasis& basis) {
  const auto& g = basis.geometry();
  const auto pts = quadrature_points(g);
  std::array<std::array<double, 4>, 4> m{};
  for (const auto& x : pts) {
    std::array<Vec3, 4> w;
    for (int f = 0; f < 4; ++f) w[f] = basis.face(f, x);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m[i][j] += 0.25 * g.volume * dot(w[i], w[j]);
  }
  return m;
}

std::array<std::array<double, 4>, 4> element_vertex_mass(const ElementBasis& basis) {
  // Integral of lambda_i lambda_j over a simplex: |K| (1 + delta_ij) / 20.
  const double v = basis.geometry().volume;
  std::array<std::array<double, 4>, 4> m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = v * (i == j ? 0.1 : 0.05);
  return m;
}

SparseMatrix assemble_mass(const Mesh& mesh, const DofMaps& dofs, Space space) {
  std::vector<Triplet> trips;
  std::size_t n = 0;
  switch (space) {
    case Space::Vertex:
      n = dofs.num_vertex_dofs();
      trips.reserve(mesh.num_tets() * 16);
      break;
    case Space::Edge:
      n = dofs.num_edge_dofs();
      trips.reserve(mesh.num_tets() * 36);
      break;
    case Space::Face:
      n = dofs.num_face_dofs();
      trips.reserve(mesh.num_tets() * 16);
      break;
  }
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const ElementBasis basis(mesh, t);
    auto scatter = [&](const auto& local, auto global_dof) {
      const int k = static_cast<int>(local.size());
      for (int i = 0; i < k; ++i) {
        const int gi = global_dof(i);
        if (gi < 0) continue;
        for (int j = 0; j < k; ++j)
          if (int gj = global_dof(j); gj >= 0) trips.push_back({gi, gj, local[i][j]});
      }
    };
    switch (space) {
      case Space::Vertex:
        scatter(element_vertex_mass(basis), [&](int i) { return dofs.vertex_dof[mesh.tets[t][i]]; });
        break;
      case Space::Edge:
        scatter(element_edge_mass(basis), [&](int i) { return dofs.edge_dof[mesh.tet_edges[t][i]]; });
        break;
      case Space::Face:
        scatter(element_face_mass(basis), [&](int i) { return dofs.face_dof[mesh.tet_faces[t][i]]; });
        break;
    }
  }
  return SparseMatrix::from_triplets(n, n, std::move(trips));
}

namespace {

template <class DofOf>
SparseMatrix assemble_stiffness(const Mesh& mesh, std::size_t n, DofOf dof_of) {
  std::vector<Triplet> trips;
  trips.reserve(mesh.num_tets() * 16);
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const auto g = TetGeometry::from_vertices(mesh.tet_points(t));
    if (!(g.volume > 0.0)) throw std::runtime_error("degenerate tet " + std::to_string(t));
    for (int i = 0; i < 4; ++i) {
      const int gi = dof_of(mesh.tets[t][i]);
      if (gi < 0) continue;
      for (int j = 0; j < 4; ++j)
        if (int gj = dof_of(mesh.tets[t][j]); gj >= 0) trips.push_back({gi, gj, g.volume * dot(g.grad[i], g.grad[j])});
    }
  }
  return SparseMatrix::from_triplets(n, n, std::move(trips));
}

}  // namespace

SparseMatrix assemble_stiffness_nodal(const Mesh& mesh, const DofMaps& dofs) {
  return assemble_stiffness(mesh, dofs.num_vertex_dofs(), [&](int v) { return dofs.vertex_dof[v]; });
}

SparseMatrix assemble_stiffness_full(const Mesh& mesh) {
  return assemble_stiffness(mesh, mesh.num_vertices(), [](int v) { return v; });
}

SparseMatrix assemble_impedance(const Mesh& mesh, const DofMaps& dofs, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("impedance parameter gamma must be positive");
  std::vector<Triplet> trips;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face_tag[f] != BoundaryTag::GammaI) continue;
    const int t = mesh.face_tets[f][0];
    const auto& tf = mesh.tet_faces[t];
    int opposite = 0;
    while (tf[opposite] != static_cast<int>(f)) ++opposite;
    const ElementBasis basis(mesh, static_cast<std::size_t>(t));
    const auto& x = basis.geometry().x;

    std::array<int, 3> corner{};
    for (int k = 0, j = 0; k < 4; ++k)
      if (k != opposite) corner[j++] = k;
    const Vec3 an = cross(x[corner[1]] - x[corner[0]], x[corner[2]] - x[corner[0]]);
    const double area = 0.5 * norm(an);
    const Vec3 n = (0.5 / area) * an;

    // Only the three edges of the face have a nonzero tangential trace on it.
    std::array<int, 3> local_edges{};
    for (int le = 0, j = 0; le < 6; ++le)
      if (kTetEdgeVertices[le][0] != opposite && kTetEdgeVertices[le][1] != opposite) local_edges[j++] = le;

    std::array<std::array<double, 3>, 3> local{};
    for (int q = 0; q < 3; ++q) {
      std::array<double, 3> l{1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
      l[q] = 2.0 / 3.0;
      const Vec3 xq = l[0] * x[corner[0]] + l[1] * x[corner[1]] + l[2] * x[corner[2]];
      std::array<Vec3, 3> tan;
      for (int a = 0; a < 3; ++a) {
        const Vec3 w = basis.edge(local_edges[a], xq);
        tan[a] = w - dot(w, n) * n;
      }
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) local[a][b] += (1.0 + gamma) * (area / 3.0) * dot(tan[a], tan[b]);
    }
    for (int a = 0; a < 3; ++a) {
      const int ga = dofs.edge_dof[mesh.tet_edges[t][local_edges[a]]];
      if (ga < 0) continue;
      for (int b = 0; b < 3; ++b)
        if (int gb = dofs.edge_dof[mesh.tet_edges[t][local_edges[b]]]; gb >= 0) trips.push_back({ga, gb, local[a][b]});
    }
  }
  return SparseMatrix::from_triplets(dofs.num_edge_dofs(), dofs.num_edge_dofs(), std::move(trips));
}

SystemMatrices assemble_system(const Mesh& mesh, const DofMaps& dofs, double gamma) {
  SystemMatrices m;
  m.M_v = assemble_mass(mesh, dofs, Space::Vertex);
  m.M_e = assemble_mass(mesh, dofs, Space::Edge);
  m.M_f = assemble_mass(mesh, dofs, Space::Face);
  m.L_v = assemble_stiffness_nodal(mesh, dofs);
  m.Z_e = assemble_impedance(mesh, dofs, gamma);
  m.gamma = gamma;
  return m;
}

void dump_matrices(const SystemMatrices& m, const IncidenceMatrices& d, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const SparseMatrix& a, const std::string& name) {
    const auto path = std::filesystem::path(dir) / (name + ".txt");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    a.write_triplets(out);
    if (!out) throw std::runtime_error("write failed: " + path.string());
  };
  write(m.M_v, "M_v");
  write(m.M_e, "M_e");
  write(m.M_f, "M_f");
  write(m.L_v, "L_v");
  write(m.Z_e, "Z_e");
  write(d.grad, "D_grad");
  write(d.curl, "D_curl");
}

}  // namespace ads
