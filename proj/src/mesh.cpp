#include "ads/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ads {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Interior:
      return "Interior";
    case BoundaryTag::GammaI:
      return "GammaI";
    case BoundaryTag::GammaO:
      return "GammaO";
  }
  return "?";
}

namespace {

using Key = std::uint64_t;

Key edge_key(std::uint64_t nv, int a, int b) { return static_cast<Key>(a) * nv + static_cast<Key>(b); }

Key face_key(std::uint64_t nv, int a, int b, int c) {
  return (static_cast<Key>(a) * nv + static_cast<Key>(b)) * nv + static_cast<Key>(c);
}

std::size_t find_sorted(const std::vector<Key>& keys, Key k) {
  auto it = std::lower_bound(keys.begin(), keys.end(), k);
  return static_cast<std::size_t>(it - keys.begin());
}

BoundaryTag common_boundary_tag(BoundaryTag a, BoundaryTag b, BoundaryTag c) {
  if (a == b && b == c && a != BoundaryTag::Interior) return a;
  return BoundaryTag::Interior;
}

}  // namespace

Mesh Mesh::from_tets(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets,
                     std::vector<BoundaryTag> vertex_tag) {
  if (vertex_tag.size() != vertices.size())
    throw std::invalid_argument("vertex tag count does not match vertex count");

  Mesh m;
  m.vertices = std::move(vertices);
  m.tets = std::move(tets);
  m.vertex_tag = std::move(vertex_tag);
  const auto nv = static_cast<std::uint64_t>(m.vertices.size());

  for (std::size_t t = 0; t < m.tets.size(); ++t) {
    auto& c = m.tets[t];
    for (int v : c)
      if (v < 0 || static_cast<std::uint64_t>(v) >= nv)
        throw std::invalid_argument("tet " + std::to_string(t) + " references a missing vertex");
    double vol = signed_volume(m.vertices[c[0]], m.vertices[c[1]], m.vertices[c[2]], m.vertices[c[3]]);
    if (vol < 0.0) {
      std::swap(c[2], c[3]);
      vol = -vol;
    }
    if (!(vol > 0.0)) throw std::runtime_error("degenerate tet " + std::to_string(t));
  }

  std::vector<Key> ekeys;
  std::vector<Key> fkeys;
  ekeys.reserve(m.tets.size() * 6);
  fkeys.reserve(m.tets.size() * 4);
  for (const auto& c : m.tets) {
    std::array<int, 4> s = c;
    std::sort(s.begin(), s.end());
    for (const auto& [a, b] : kTetEdgeVertices) ekeys.push_back(edge_key(nv, s[a], s[b]));
    fkeys.push_back(face_key(nv, s[1], s[2], s[3]));
    fkeys.push_back(face_key(nv, s[0], s[2], s[3]));
    fkeys.push_back(face_key(nv, s[0], s[1], s[3]));
    fkeys.push_back(face_key(nv, s[0], s[1], s[2]));
  }
  std::sort(ekeys.begin(), ekeys.end());
  ekeys.erase(std::unique(ekeys.begin(), ekeys.end()), ekeys.end());
  std::sort(fkeys.begin(), fkeys.end());
  fkeys.erase(std::unique(fkeys.begin(), fkeys.end()), fkeys.end());

  m.edges.resize(ekeys.size());
  for (std::size_t e = 0; e < ekeys.size(); ++e)
    m.edges[e] = {static_cast<int>(ekeys[e] / nv), static_cast<int>(ekeys[e] % nv)};
  m.faces.resize(fkeys.size());
  for (std::size_t f = 0; f < fkeys.size(); ++f) {
    const Key k = fkeys[f];
    m.faces[f] = {static_cast<int>(k / (nv * nv)), static_cast<int>((k / nv) % nv), static_cast<int>(k % nv)};
  }

  m.tet_edges.resize(m.tets.size());
  m.tet_faces.resize(m.tets.size());
  m.face_tets.assign(m.faces.size(), {-1, -1});
  std::vector<int> face_count(m.faces.size(), 0);
  for (std::size_t t = 0; t < m.tets.size(); ++t) {
    const auto& c = m.tets[t];
    for (int le = 0; le < 6; ++le) {
      int a = c[kTetEdgeVertices[le][0]];
      int b = c[kTetEdgeVertices[le][1]];
      if (a > b) std::swap(a, b);
      m.tet_edges[t][le] = static_cast<int>(find_sorted(ekeys, edge_key(nv, a, b)));
    }
    for (int lf = 0; lf < 4; ++lf) {
      std::array<int, 3> s{};
      for (int k = 0, j = 0; k < 4; ++k)
        if (k != lf) s[j++] = c[k];
      std::sort(s.begin(), s.end());
      const auto f = find_sorted(fkeys, face_key(nv, s[0], s[1], s[2]));
      m.tet_faces[t][lf] = static_cast<int>(f);
      if (face_count[f] >= 2) throw std::runtime_error("face shared by more than two tets");
      m.face_tets[f][face_count[f]++] = static_cast<int>(t);
    }
  }

  m.face_tag.assign(m.faces.size(), BoundaryTag::Interior);
  m.edge_tag.assign(m.edges.size(), BoundaryTag::Interior);
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    if (face_count[f] != 1) continue;
    const auto& fv = m.faces[f];
    const BoundaryTag tag = common_boundary_tag(m.vertex_tag[fv[0]], m.vertex_tag[fv[1]], m.vertex_tag[fv[2]]);
    m.face_tag[f] = tag;
    if (tag == BoundaryTag::Interior) continue;
    for (auto [a, b] : {std::pair{fv[0], fv[1]}, std::pair{fv[1], fv[2]}, std::pair{fv[0], fv[2]}})
      m.edge_tag[find_sorted(ekeys, edge_key(nv, a, b))] = tag;
  }
  return m;
}

Mesh build_shell_mesh(const LatticeSpec& spec) {
  if (spec.J < 2) throw std::invalid_argument("J must be at least 2, got " + std::to_string(spec.J));
  if (spec.J > 7) throw std::invalid_argument("J above 7 is not supported, got " + std::to_string(spec.J));

  const int n = spec.n();
  const double R = spec.outer_radius;
  // Cell side is 4h, so the cube [-R/2, R/2] holds R*n/4 cells per axis.
  const double m_real = R * n / 4.0;
  const int m = static_cast<int>(std::lround(m_real));
  if (!(R > 1.0) || std::abs(m_real - m) > 1e-12)
    throw std::invalid_argument("outer radius must exceed 1 and be a multiple of the cell size 4h");

  // Centered lattice coordinate c = 2i - m; the physical coordinate is 2h*c.
  auto centered = [m](int i) { return 2 * i - m; };
  // A cell [c, c+2] meets the open interval (-1/2, 1/2) iff 4c < n and 4(c+2) > -n.
  auto meets_hole = [n](int c) { return 4 * c < n && 4 * (c + 2) > -n; };

  int c_in = 0;  // half-width of the removed block, in centered units
  for (int i = 0; i < m; ++i) {
    const int c = centered(i);
    if (meets_hole(c)) c_in = std::max({c_in, std::abs(c), std::abs(c + 2)});
  }
  if (c_in >= m) throw std::invalid_argument("outer radius leaves no cells outside the obstacle");

  auto linf = [&](int i, int j, int k) {
    return std::max({std::abs(centered(i)), std::abs(centered(j)), std::abs(centered(k))});
  };

  std::vector<int> vertex_id(static_cast<std::size_t>(m + 1) * (m + 1) * (m + 1), -1);
  auto node = [m](int i, int j, int k) { return (static_cast<std::size_t>(k) * (m + 1) + j) * (m + 1) + i; };

  std::vector<Vec3> vertices;
  std::vector<BoundaryTag> tags;
  std::vector<std::array<int, 3>> lattice;
  const double h2 = 2.0 * spec.h();
  const double s_in = h2 * c_in;
  const double s_out = h2 * m;
  for (int k = 0; k <= m; ++k)
    for (int j = 0; j <= m; ++j)
      for (int i = 0; i <= m; ++i) {
        const int s = linf(i, j, k);
        if (s < c_in) continue;
        vertex_id[node(i, j, k)] = static_cast<int>(vertices.size());
        const Vec3 x{h2 * centered(i), h2 * centered(j), h2 * centered(k)};
        // Radial map: the l-infinity radius is sent affinely onto [1, R].
        const double rho = 1.0 + (R - 1.0) * (h2 * s - s_in) / (s_out - s_in);
        vertices.push_back((rho / norm(x)) * x);
        tags.push_back(s == c_in ? BoundaryTag::GammaI : (s == m ? BoundaryTag::GammaO : BoundaryTag::Interior));
        lattice.push_back({i, j, k});
      }

  // Kuhn subdivision: each tet walks from the cell's low corner to its high
  // corner along the three axes in one of the 6 orders.
  static constexpr std::array<std::array<int, 3>, 6> kPerms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::vector<std::array<int, 4>> tets;
  tets.reserve(static_cast<std::size_t>(m) * m * m * 6);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        if (meets_hole(centered(i)) && meets_hole(centered(j)) && meets_hole(centered(k))) continue;
        for (std::size_t p = 0; p < kPerms.size(); ++p) {
          std::array<int, 3> ijk{i, j, k};
          std::array<int, 4> t{};
          t[0] = vertex_id[node(ijk[0], ijk[1], ijk[2])];
          for (int step = 0; step < 3; ++step) {
            ++ijk[kPerms[p][step]];
            t[step + 1] = vertex_id[node(ijk[0], ijk[1], ijk[2])];
          }
          // Odd permutations give negatively oriented lattice tets.
          if (p == 1 || p == 2 || p == 5) std::swap(t[2], t[3]);
          const auto& x = vertices;
          if (!(signed_volume(x[t[0]], x[t[1]], x[t[2]], x[t[3]]) > 0.0))
            throw std::runtime_error("mapped tet has non-positive volume");
          tets.push_back(t);
        }
      }

  Mesh mesh = Mesh::from_tets(std::move(vertices), std::move(tets), std::move(tags));
  mesh.lattice = std::move(lattice);
  mesh.cells_per_axis = m;
  mesh.outer_radius = R;
  return mesh;
}

Mesh swap_boundary_tags(Mesh mesh) {
  auto swap_tag = [](BoundaryTag& t) {
    if (t == BoundaryTag::GammaI)
      t = BoundaryTag::GammaO;
    else if (t == BoundaryTag::GammaO)
      t = BoundaryTag::GammaI;
  };
  for (auto& t : mesh.vertex_tag) swap_tag(t);
  for (auto& t : mesh.edge_tag) swap_tag(t);
  for (auto& t : mesh.face_tag) swap_tag(t);
  return mesh;
}

std::size_t MeshStatistics::total_vertices() const { return counts[0][0] + counts[1][0] + counts[2][0]; }
std::size_t MeshStatistics::total_edges() const { return counts[0][1] + counts[1][1] + counts[2][1]; }
std::size_t MeshStatistics::total_faces() const { return counts[0][2] + counts[1][2] + counts[2][2]; }

MeshStatistics mesh_statistics(const Mesh& mesh) {
  MeshStatistics s;
  for (auto t : mesh.vertex_tag) ++s.counts[static_cast<int>(t)][0];
  for (auto t : mesh.edge_tag) ++s.counts[static_cast<int>(t)][1];
  for (auto t : mesh.face_tag) ++s.counts[static_cast<int>(t)][2];
  s.counts[0][3] = mesh.num_tets();
  s.tets = mesh.num_tets();
  return s;
}

}  // namespace ads
