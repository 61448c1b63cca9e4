#include "ads/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "ads/fields.hpp"

namespace ads {

bool CheckReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

void CheckReport::print(std::ostream& out) const {
  for (const auto& r : results) out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
}

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v{g(rng), g(rng), g(rng)};
  return (1.0 / norm(v)) * v;
}

// u^T M u = |c|^2 |K| for the constant field c on every element.
CheckResult element_mass_constants(const Mesh& mesh) {
  const std::array<Vec3, 3> constants{Vec3{1.0, 0.0, 0.0}, Vec3{0.3, -1.2, 0.7}, Vec3{-0.5, 0.25, 2.0}};
  double worst = 0.0;
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const ElementBasis basis(mesh, t);
    const auto& x = basis.geometry().x;
    const double V = basis.geometry().volume;
    const auto Me = element_edge_mass(basis);
    const auto Mf = element_face_mass(basis);
    const auto Mv = element_vertex_mass(basis);
    for (const auto& c : constants) {
      std::array<double, 6> ue{};
      for (int le = 0; le < 6; ++le) ue[le] = dot(c, x[basis.edge_head(le)] - x[basis.edge_tail(le)]);
      std::array<double, 4> uf{};
      for (int lf = 0; lf < 4; ++lf) {
        const auto& fv = mesh.faces[mesh.tet_faces[t][lf]];
        const Vec3 n2 = cross(mesh.vertices[fv[1]] - mesh.vertices[fv[0]], mesh.vertices[fv[2]] - mesh.vertices[fv[0]]);
        uf[lf] = 0.5 * dot(c, n2);
      }
      double qe = 0.0, qf = 0.0;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) qe += ue[i] * Me[i][j] * ue[j];
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) qf += uf[i] * Mf[i][j] * uf[j];
      const double exact = dot(c, c) * V;
      worst = std::max({worst, std::abs(qe - exact) / exact, std::abs(qf - exact) / exact});
    }
    double qv = 0.0;
    for (const auto& row : Mv)
      for (double v : row) qv += v;
    worst = std::max(worst, std::abs(qv - V) / V);
  }
  return {"element mass reproduces constants", worst <= 1e-12, fmt("max relative error %.3e", worst)};
}

CheckResult analytic_identities(double gamma) {
  const double r = r_of_gamma(gamma);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> radius(1.2, 3.8), time(0.0, 2.0);
  double bc = 0.0, div = 0.0, rot = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double t = time(rng);
    bc = std::max(bc, norm(impedance_residual(t, random_unit(rng), r, gamma)));
    const Vec3 x = radius(rng) * random_unit(rng);
    const VectorField E = [&](const Vec3& p) { return eval_E_star(t, p, r); };
    const VectorField B = [&](const Vec3& p) { return eval_B_star(t, p, r); };
    constexpr double h = 1e-4;
    div = std::max({div, std::abs(fd_divergence(E, x, h)), std::abs(fd_divergence(B, x, h))});
    rot = std::max(rot, norm(fd_curl(E, x, h) + r * eval_B_star(t, x, r)));
  }
  const bool ok = bc <= 1e-12 && div <= 1e-6 && rot <= 1e-6;
  std::ostringstream d;
  d << "boundary " << fmt("%.2e", bc) << ", div " << fmt("%.2e", div) << ", curl E + rB " << fmt("%.2e", rot);
  return {"exact solution identities", ok, d.str()};
}

}  // namespace

CheckReport run_checks(const SimConfig& config, std::ostream* log) {
  CheckReport rep;
  auto record = [&](CheckResult r) {
    if (log) *log << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << std::endl;
    rep.results.push_back(std::move(r));
  };

  const auto disc = Discretization::build(config);
  const auto& m = disc.matrices;
  const auto& d = disc.incidence;
  std::mt19937_64 rng(2024);

  record({"discrete complex", curl_grad_vanishes(d), "D_curl D_grad == 0 in integer arithmetic"});
  record(element_mass_constants(disc.mesh));

  const bool sym = m.M_v.is_symmetric() && m.M_e.is_symmetric() && m.M_f.is_symmetric() && m.Z_e.is_symmetric();
  record({"mass and impedance symmetry", sym, "exact"});

  {
    const SparseMatrix GtMeG = multiply(d.grad.transpose(), multiply(m.M_e, d.grad));
    const double diff = max_abs(add(1.0, m.L_v, -1.0, GtMeG).values()) / max_abs(m.L_v.values());
    record({"nodal stiffness equals G^T M_e G", diff <= 1e-12, fmt("relative difference %.3e", diff)});
  }
  {
    const double zg = max_abs(multiply(m.Z_e, d.grad).values()) / max_abs(m.Z_e.values());
    record({"impedance kills gradients", zg <= 1e-14, fmt("max |Z G| / max |Z| = %.3e", zg)});
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
      auto x = random_vector(rng, m.Z_e.rows());
      const double s = 1.0 / norm2(x);
      for (auto& v : x) v *= s;
      worst = std::min(worst, dot(x, m.Z_e * x));
    }
    record({"impedance positive semidefinite", worst >= -1e-14, fmt("min x^T Z x over unit x = %.3e", worst)});
  }
  {
    const SparseMatrix A = skew_operator(m, d);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto x = random_vector(rng, A.rows());
      const auto Ax = A * x;
      worst = std::max(worst, std::abs(dot(x, Ax)) / (norm2(x) * norm2(Ax)));
    }
    record({"generator skew", worst <= 1e-12, fmt("max |x^T A x| / (|x| |Ax|) = %.3e", worst)});
    const auto op = build_operator(m, d, config.tau, !config.zero_impedance, config.eliminate_b);
    record({"Crank-Nicolson matrix symmetric", op.lhs.is_symmetric(), fmt("max asymmetry %.1e", op.lhs.max_asymmetry())});
    if (op.eliminate_b) {
      double scale = 0.0;
      for (double v : op.reduced.values()) scale = std::max(scale, std::abs(v));
      const double asym = op.reduced.max_asymmetry() / scale;
      record({"reduced matrix symmetric", asym <= 1e-14, fmt("max relative asymmetry %.1e", asym)});
    }
  }

  const auto run = run_pipeline(disc, config);
  const auto& recs = run.report.records;
  if (config.negative_control) {
    const bool seen = !run.lemma.passed && run.lemma.max_pressure_ratio > 1e-3;
    record({"monitor flags unprojected data", seen,
         (seen ? "expected violation detected: " : "violation not detected: ") + run.lemma.message});
  } else {
    record({"pressure and divergence monitor", run.lemma.passed,
         fmt("max ||p||/||E_0|| = %.2e, max div ratio = %.2e", run.lemma.max_pressure_ratio,
             run.lemma.max_divergence_ratio)});
  }

  {
    std::vector<double> total;
    for (const auto& r : recs) total.push_back(r.energy + r.p_norm * r.p_norm);
    const double u0 = total.front();
    if (config.zero_impedance) {
      double drift = 0.0;
      for (double e : total) drift = std::max(drift, std::abs(std::sqrt(e) - std::sqrt(u0)));
      drift /= std::max(std::sqrt(u0), 1e-300);
      record({"energy conserved without impedance", drift <= 1e-8, fmt("max relative drift %.3e", drift)});
    } else {
      double rise = 0.0;
      for (std::size_t k = 1; k < total.size(); ++k)
        rise = std::max(rise, (total[k] - total[k - 1]) / std::max(u0, 1e-300));
      record({"energy non-increasing", rise <= 1e-8, fmt("max relative increase %.3e", rise)});
    }
  }

  record(analytic_identities(config.gamma));
  return rep;
}

}  // namespace ads
