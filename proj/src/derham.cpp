#include "ads/derham.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ads {

DofMaps enumerate_dofs(const Mesh& mesh) {
  DofMaps d;
  d.vertex_dof.assign(mesh.num_vertices(), -1);
  d.edge_dof.assign(mesh.num_edges(), -1);
  d.face_dof.assign(mesh.num_faces(), -1);

  for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
    if (mesh.vertex_tag[v] == BoundaryTag::Interior) {
      d.vertex_dof[v] = static_cast<int>(d.vertex_entity.size());
      d.vertex_entity.push_back(static_cast<int>(v));
    }

  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_tag[e] == BoundaryTag::GammaO) continue;
    d.edge_dof[e] = static_cast<int>(d.edge_entity.size());
    d.edge_entity.push_back(static_cast<int>(e));
    const Vec3 t = mesh.vertices[mesh.edges[e][1]] - mesh.vertices[mesh.edges[e][0]];
    const double len = norm(t);
    d.edge_length.push_back(len);
    d.edge_tangent.push_back((1.0 / len) * t);
  }

  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face_tag[f] == BoundaryTag::GammaO) continue;
    d.face_dof[f] = static_cast<int>(d.face_entity.size());
    d.face_entity.push_back(static_cast<int>(f));
    const auto& fv = mesh.faces[f];
    const Vec3 n = cross(mesh.vertices[fv[1]] - mesh.vertices[fv[0]], mesh.vertices[fv[2]] - mesh.vertices[fv[0]]);
    const double twice_area = norm(n);
    d.face_area.push_back(0.5 * twice_area);
    d.face_normal.push_back((1.0 / twice_area) * n);
  }
  return d;
}

int find_edge(const Mesh& mesh, int a, int b) {
  if (a > b) std::swap(a, b);
  const std::array<int, 2> key{a, b};
  auto it = std::lower_bound(mesh.edges.begin(), mesh.edges.end(), key);
  if (it == mesh.edges.end() || *it != key) return -1;
  return static_cast<int>(it - mesh.edges.begin());
}

IncidenceMatrices incidence(const Mesh& mesh, const DofMaps& dofs) {
  std::vector<Triplet> g;
  g.reserve(2 * dofs.num_edge_dofs());
  for (std::size_t i = 0; i < dofs.num_edge_dofs(); ++i) {
    const auto& ev = mesh.edges[dofs.edge_entity[i]];
    // Tangent runs tail -> head, so grad q has moment q(head) - q(tail).
    if (int t = dofs.vertex_dof[ev[0]]; t >= 0) g.push_back({static_cast<int>(i), t, -1.0});
    if (int h = dofs.vertex_dof[ev[1]]; h >= 0) g.push_back({static_cast<int>(i), h, +1.0});
  }

  std::vector<Triplet> c;
  c.reserve(3 * dofs.num_face_dofs());
  for (std::size_t i = 0; i < dofs.num_face_dofs(); ++i) {
    const auto& fv = mesh.faces[dofs.face_entity[i]];
    // Boundary cycle a -> b -> c -> a of the ascending triple (a, b, c).
    const std::array<std::pair<std::array<int, 2>, double>, 3> cycle{
        {{{fv[0], fv[1]}, +1.0}, {{fv[1], fv[2]}, +1.0}, {{fv[0], fv[2]}, -1.0}}};
    for (const auto& [ab, sign] : cycle) {
      const int e = find_edge(mesh, ab[0], ab[1]);
      if (e < 0) throw std::logic_error("face edge missing from mesh");
      if (int k = dofs.edge_dof[e]; k >= 0) c.push_back({static_cast<int>(i), k, sign});
    }
  }

  IncidenceMatrices d;
  d.grad = SparseMatrix::from_triplets(dofs.num_edge_dofs(), dofs.num_vertex_dofs(), std::move(g));
  d.curl = SparseMatrix::from_triplets(dofs.num_face_dofs(), dofs.num_edge_dofs(), std::move(c));
  return d;
}

namespace {

long long as_integer(double v) {
  const double r = std::nearbyint(v);
  if (r != v) throw std::invalid_argument("incidence entry is not an integer: " + std::to_string(v));
  return static_cast<long long>(r);
}

}  // namespace

bool curl_grad_vanishes(const IncidenceMatrices& d) {
  const auto& a = d.curl;
  const auto& b = d.grad;
  if (a.cols() != b.rows()) throw std::invalid_argument("incidence dimension mismatch");
  const auto arp = a.row_offsets();
  const auto aci = a.col_indices();
  const auto av = a.values();
  const auto brp = b.row_offsets();
  const auto bci = b.col_indices();
  const auto bv = b.values();
  std::vector<long long> acc(b.cols(), 0);
  std::vector<int> touched;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    touched.clear();
    for (std::size_t ka = arp[i]; ka < arp[i + 1]; ++ka) {
      const long long x = as_integer(av[ka]);
      const int k = aci[ka];
      for (std::size_t kb = brp[k]; kb < brp[k + 1]; ++kb) {
        acc[bci[kb]] += x * as_integer(bv[kb]);
        touched.push_back(bci[kb]);
      }
    }
    for (int j : touched)
      if (acc[j] != 0) return false;
  }
  return true;
}

ElementBasis::ElementBasis(const Mesh& mesh, std::size_t tet)
    : geo_(TetGeometry::from_vertices(mesh.tet_points(tet))), tet_(tet) {
  if (!(geo_.volume > 0.0)) throw std::runtime_error("degenerate tet " + std::to_string(tet));
  const auto& c = mesh.tets[tet];
  for (int le = 0; le < 6; ++le) {
    const int a = kTetEdgeVertices[le][0];
    const int b = kTetEdgeVertices[le][1];
    const bool forward = c[a] < c[b];
    tail_[le] = forward ? a : b;
    head_[le] = forward ? b : a;
  }
  for (int lf = 0; lf < 4; ++lf) {
    std::array<int, 3> loc{};
    for (int k = 0, j = 0; k < 4; ++k)
      if (k != lf) loc[j++] = k;
    std::sort(loc.begin(), loc.end(), [&](int p, int q) { return c[p] < c[q]; });
    const Vec3 n = cross(geo_.x[loc[1]] - geo_.x[loc[0]], geo_.x[loc[2]] - geo_.x[loc[0]]);
    face_sign_[lf] = dot(n, geo_.x[loc[0]] - geo_.x[lf]) > 0.0 ? 1 : -1;
  }
}

Vec3 ElementBasis::edge(int le, const Vec3& x) const {
  const auto l = geo_.barycentric(x);
  const int i = tail_[le], j = head_[le];
  return l[i] * geo_.grad[j] - l[j] * geo_.grad[i];
}

Vec3 ElementBasis::edge_curl(int le) const { return 2.0 * cross(geo_.grad[tail_[le]], geo_.grad[head_[le]]); }

Vec3 ElementBasis::face(int lf, const Vec3& x) const {
  return (face_sign_[lf] / (3.0 * geo_.volume)) * (x - geo_.x[lf]);
}

double ElementBasis::face_divergence(int lf) const { return face_sign_[lf] / geo_.volume; }

std::vector<double> interpolate_edge_field(const VectorField& field, const Mesh& mesh, const DofMaps& dofs) {
  static const double off = 0.5 * std::sqrt(3.0 / 5.0);
  static constexpr std::array<double, 3> w{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  const std::array<double, 3> s{0.5 - off, 0.5, 0.5 + off};
  std::vector<double> out(dofs.num_edge_dofs());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& ev = mesh.edges[dofs.edge_entity[i]];
    const Vec3& a = mesh.vertices[ev[0]];
    const Vec3 t = mesh.vertices[ev[1]] - a;
    double sum = 0.0;
    for (int q = 0; q < 3; ++q) sum += w[q] * dot(field(a + s[q] * t), t);
    out[i] = sum;
  }
  return out;
}

std::vector<double> interpolate_face_field(const VectorField& field, const Mesh& mesh, const DofMaps& dofs) {
  std::vector<double> out(dofs.num_face_dofs());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& fv = mesh.faces[dofs.face_entity[i]];
    const Vec3& a = mesh.vertices[fv[0]];
    const Vec3& b = mesh.vertices[fv[1]];
    const Vec3& c = mesh.vertices[fv[2]];
    const Vec3 area_normal = 0.5 * cross(b - a, c - a);
    double sum = 0.0;
    for (int q = 0; q < 3; ++q) {
      std::array<double, 3> l{1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
      l[q] = 2.0 / 3.0;
      const Vec3 x = l[0] * a + l[1] * b + l[2] * c;
      sum += dot(field(x), area_normal) / 3.0;
    }
    out[i] = sum;
  }
  return out;
}

std::vector<double> interpolate_vertex_field(const ScalarField& field, const Mesh& mesh, const DofMaps& dofs) {
  std::vector<double> out(dofs.num_vertex_dofs());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = field(mesh.vertices[dofs.vertex_entity[i]]);
  return out;
}

FieldEvaluator::FieldEvaluator(const Mesh& mesh, const DofMaps& dofs) : mesh_(mesh), dofs_(dofs) {
  boxes_.reserve(mesh.num_tets());
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const auto p = mesh.tet_points(t);
    Vec3 lo = p[0], hi = p[0];
    for (const auto& x : p)
      for (int k = 0; k < 3; ++k) {
        lo[k] = std::min(lo[k], x[k]);
        hi[k] = std::max(hi[k], x[k]);
      }
    boxes_.push_back({lo, hi});
  }
}

std::optional<std::size_t> FieldEvaluator::locate(const Vec3& x) const {
  constexpr double tol = 1e-12;
  for (std::size_t t = 0; t < boxes_.size(); ++t) {
    const auto& [lo, hi] = boxes_[t];
    bool in_box = true;
    for (int k = 0; k < 3; ++k) in_box = in_box && x[k] >= lo[k] - tol && x[k] <= hi[k] + tol;
    if (!in_box) continue;
    const auto l = TetGeometry::from_vertices(mesh_.tet_points(t)).barycentric(x);
    if (std::all_of(l.begin(), l.end(), [](double v) { return v >= -tol; })) return t;
  }
  return std::nullopt;
}

Vec3 FieldEvaluator::edge_field_in(std::size_t tet, std::span<const double> coeffs, const Vec3& x) const {
  const ElementBasis basis(mesh_, tet);
  Vec3 v{0.0, 0.0, 0.0};
  for (int le = 0; le < 6; ++le)
    if (int k = dofs_.edge_dof[mesh_.tet_edges[tet][le]]; k >= 0) v += coeffs[k] * basis.edge(le, x);
  return v;
}

Vec3 FieldEvaluator::face_field_in(std::size_t tet, std::span<const double> coeffs, const Vec3& x) const {
  const ElementBasis basis(mesh_, tet);
  Vec3 v{0.0, 0.0, 0.0};
  for (int lf = 0; lf < 4; ++lf)
    if (int k = dofs_.face_dof[mesh_.tet_faces[tet][lf]]; k >= 0) v += coeffs[k] * basis.face(lf, x);
  return v;
}

double FieldEvaluator::vertex_field_in(std::size_t tet, std::span<const double> coeffs, const Vec3& x) const {
  const auto l = TetGeometry::from_vertices(mesh_.tet_points(tet)).barycentric(x);
  double v = 0.0;
  for (int i = 0; i < 4; ++i)
    if (int k = dofs_.vertex_dof[mesh_.tets[tet][i]]; k >= 0) v += coeffs[k] * l[i];
  return v;
}

std::optional<Vec3> FieldEvaluator::edge_field(std::span<const double> coeffs, const Vec3& x) const {
  if (auto t = locate(x)) return edge_field_in(*t, coeffs, x);
  return std::nullopt;
}

std::optional<Vec3> FieldEvaluator::face_field(std::span<const double> coeffs, const Vec3& x) const {
  if (auto t = locate(x)) return face_field_in(*t, coeffs, x);
  return std::nullopt;
}

std::optional<double> FieldEvaluator::vertex_field(std::span<const double> coeffs, const Vec3& x) const {
  if (auto t = locate(x)) return vertex_field_in(*t, coeffs, x);
  return std::nullopt;
}

}  // namespace ads
