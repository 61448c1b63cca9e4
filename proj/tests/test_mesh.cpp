#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "ads/mesh.hpp"

using namespace ads;

namespace {

// Lattice nodes of [-2, 2]^3 with n cells per axis, minus the nodes strictly
// inside (-1/2, 1/2)^3. Integer test on 4i - 2n, which is n * x.
long long lattice_vertex_oracle(int n) {
  long long count = 0;
  auto inside = [n](int i) { return std::abs(4 * i - 2 * n) * 2 < n; };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k)
        if (!(inside(i) && inside(j) && inside(k))) ++count;
  return count;
}

Mesh single_tet() {
  return Mesh::from_tets({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 2, 3}},
                         std::vector<BoundaryTag>(4, BoundaryTag::Interior));
}

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("lattice vertex counts for J = 3..6") {
    CHECK(lattice_vertex_oracle(8) == 728);
    CHECK(lattice_vertex_oracle(16) == 4886);
    CHECK(lattice_vertex_oracle(32) == 35594);
    CHECK(lattice_vertex_oracle(64) == 271250);
    for (int n : {8, 16, 32, 64}) {
      const long long hole = n / 4 - 1;
      CHECK(lattice_vertex_oracle(n) == (n + 1LL) * (n + 1) * (n + 1) - hole * hole * hole);
    }
  }

  TEST_CASE("built meshes have the published vertex counts") {
    CHECK(build_shell_mesh({.J = 3}).num_vertices() == 728);
    CHECK(build_shell_mesh({.J = 4}).num_vertices() == 4886);
    CHECK(build_shell_mesh({.J = 5}).num_vertices() == 35594);
  }

  TEST_CASE("J = 3 tet count") {
    const auto mesh = build_shell_mesh({.J = 3});
    CHECK(mesh.num_tets() == 6 * (8 * 8 * 8 - 2 * 2 * 2));
    CHECK(mesh_statistics(mesh).tets == 3024);
    // (n/4 - 1)^3 = 1 node removed from the 9^3 lattice.
    CHECK(9 * 9 * 9 - static_cast<int>(mesh.num_vertices()) == 1);
  }

  TEST_CASE("J bounds") {
    CHECK_THROWS_AS(build_shell_mesh({.J = 1}), std::invalid_argument);
    CHECK_THROWS_AS(build_shell_mesh({.J = 8}), std::invalid_argument);
    const auto m2 = build_shell_mesh({.J = 2});
    CHECK(m2.num_vertices() == 124);
    CHECK(m2.num_tets() == 6 * (64 - 8));
  }

  TEST_CASE("single tet statistics") {
    const auto mesh = single_tet();
    const auto s = mesh_statistics(mesh);
    CHECK(s.total_vertices() == 4);
    CHECK(s.total_edges() == 6);
    CHECK(s.total_faces() == 4);
    CHECK(s.tets == 1);
    CHECK(s.vertices(BoundaryTag::Interior) == 4);
  }

  TEST_CASE("negative orientation is repaired, degenerate tets throw") {
    const auto m = Mesh::from_tets({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 2, 1, 3}},
                                   std::vector<BoundaryTag>(4, BoundaryTag::Interior));
    const auto p = m.tet_points(0);
    CHECK(signed_volume(p[0], p[1], p[2], p[3]) > 0.0);
    CHECK_THROWS(Mesh::from_tets({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 0, 1}}, {{0, 1, 2, 3}},
                                 std::vector<BoundaryTag>(4, BoundaryTag::Interior)));
  }

  TEST_CASE("boundary surfaces are closed spheres") {
    for (int J : {3, 4}) {
      const auto mesh = build_shell_mesh({.J = J});
      const auto s = mesh_statistics(mesh);
      for (auto tag : {BoundaryTag::GammaI, BoundaryTag::GammaO}) {
        const long long chi = static_cast<long long>(s.vertices(tag)) - static_cast<long long>(s.edges(tag)) +
                              static_cast<long long>(s.faces(tag));
        CHECK(chi == 2);
        // Closed triangulated surface: 3F = 2E.
        CHECK(3 * s.faces(tag) == 2 * s.edges(tag));
      }
    }
  }

  TEST_CASE("conformity and boundary faces") {
    const auto mesh = build_shell_mesh({.J = 3});
    std::size_t single = 0;
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
      const auto& ft = mesh.face_tets[f];
      REQUIRE(ft[0] >= 0);
      for (int t : ft) {
        if (t < 0) continue;
        // The face's vertices are exactly the tet's vertices minus one.
        const auto& tv = mesh.tets[t];
        int hits = 0;
        for (int v : mesh.faces[f]) hits += std::count(tv.begin(), tv.end(), v);
        CHECK(hits == 3);
      }
      if (ft[1] < 0) {
        ++single;
        CHECK(mesh.face_tag[f] != BoundaryTag::Interior);
      } else {
        CHECK(mesh.face_tag[f] == BoundaryTag::Interior);
      }
    }
    const auto s = mesh_statistics(mesh);
    CHECK(single == s.faces(BoundaryTag::GammaI) + s.faces(BoundaryTag::GammaO));
  }

  TEST_CASE("Kuhn split is face-compatible on the lattice") {
    const auto mesh = build_shell_mesh({.J = 4});
    const int n = mesh.cells_per_axis;
    REQUIRE(n == 16);
    // Faces with one tet lie on the outer box or on the hole boundary; a
    // mismatched diagonal inside the lattice would leave an unpaired face.
    const int lo = 3 * n / 8, hi = 5 * n / 8;  // hole planes, x = -1/2 and 1/2
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
      if (mesh.face_tets[f][1] >= 0) continue;
      const auto& a = mesh.lattice[mesh.faces[f][0]];
      const auto& b = mesh.lattice[mesh.faces[f][1]];
      const auto& c = mesh.lattice[mesh.faces[f][2]];
      bool on_plane = false;
      for (int ax = 0; ax < 3; ++ax) {
        if (a[ax] != b[ax] || a[ax] != c[ax]) continue;
        const int v = a[ax];
        if (v == 0 || v == n) on_plane = true;
        if (v == lo || v == hi) {
          bool within = true;
          for (int o = 0; o < 3; ++o)
            if (o != ax)
              for (const auto* p : {&a, &b, &c}) within = within && (*p)[o] >= lo && (*p)[o] <= hi;
          on_plane = on_plane || within;
        }
      }
      CHECK(on_plane);
    }
  }

  TEST_CASE("mapped radii lie in [1, R]") {
    const auto mesh = build_shell_mesh({.J = 3});
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
      const double r = norm(mesh.vertices[v]);
      CHECK(r >= 1.0 - 1e-12);
      CHECK(r <= 4.0 + 1e-12);
      if (mesh.vertex_tag[v] == BoundaryTag::GammaI) CHECK(r == doctest::Approx(1.0).epsilon(1e-14));
      if (mesh.vertex_tag[v] == BoundaryTag::GammaO) CHECK(r == doctest::Approx(4.0).epsilon(1e-14));
    }
  }

  TEST_CASE("edges and faces are sorted with ascending vertices") {
    const auto mesh = build_shell_mesh({.J = 3});
    CHECK(std::is_sorted(mesh.edges.begin(), mesh.edges.end()));
    CHECK(std::is_sorted(mesh.faces.begin(), mesh.faces.end()));
    for (const auto& e : mesh.edges) CHECK(e[0] < e[1]);
    for (const auto& f : mesh.faces) CHECK((f[0] < f[1] && f[1] < f[2]));
  }

  TEST_CASE("construction is deterministic") {
    const auto a = build_shell_mesh({.J = 3});
    const auto b = build_shell_mesh({.J = 3});
    CHECK(a.vertices == b.vertices);
    CHECK(a.tets == b.tets);
    CHECK(a.faces == b.faces);
  }

  TEST_CASE("swapping boundary tags") {
    const auto a = build_shell_mesh({.J = 3});
    const auto b = swap_boundary_tags(a);
    const auto sa = mesh_statistics(a), sb = mesh_statistics(b);
    CHECK(sa.vertices(BoundaryTag::GammaI) == sb.vertices(BoundaryTag::GammaO));
    CHECK(sa.faces(BoundaryTag::GammaO) == sb.faces(BoundaryTag::GammaI));
    CHECK(sa.vertices(BoundaryTag::Interior) == sb.vertices(BoundaryTag::Interior));
  }
}
