#include "ads/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace ads {

double r_of_gamma(double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
  return 0.5 * (1.0 - std::sqrt(1.0 + 4.0 / gamma));
}

Vec3 eval_E_star(double t, const Vec3& x, double r) {
  const double rho = norm(x);
  if (rho == 0.0) throw std::domain_error("exact field is singular at the origin");
  const double s = std::exp(r * (rho + t)) / (rho * rho) * (r * r - r / rho);
  return {0.0, s * x[2], -s * x[1]};
}

Vec3 eval_B_star(double t, const Vec3& x, double r) {
  const double rho = norm(x);
  if (rho == 0.0) throw std::domain_error("exact field is singular at the origin");
  const auto [X, Y, Z] = x;
  const double e = std::exp(r * (rho + t));
  const double a = (r * r - 3.0 * r / rho + 3.0 / (rho * rho)) / (rho * rho * rho);
  const double c = 2.0 * r / (rho * rho) - 2.0 / (rho * rho * rho);
  return {e * (a * (Z * Z + Y * Y) + c), e * (-a * X * Y), e * (-a * X * Z)};
}

Vec3 impedance_residual(double t, const Vec3& x, double r, double gamma) {
  const Vec3 n = (-1.0 / norm(x)) * x;
  const Vec3 E = eval_E_star(t, x, r);
  const Vec3 B = eval_B_star(t, x, r);
  const Vec3 E_tan = E - dot(E, n) * n;
  const Vec3 B_tan = B - dot(B, n) * n;
  return (1.0 + gamma) * E_tan + cross(n, B_tan);
}

namespace {

// d f / d x_axis by central differences.
Vec3 fd_partial(const VectorField& f, const Vec3& x, int axis, double h) {
  Vec3 xp = x, xm = x;
  xp[axis] += h;
  xm[axis] -= h;
  return (0.5 / h) * (f(xp) - f(xm));
}

}  // namespace

double fd_divergence(const VectorField& f, const Vec3& x, double h) {
  return fd_partial(f, x, 0, h)[0] + fd_partial(f, x, 1, h)[1] + fd_partial(f, x, 2, h)[2];
}

Vec3 fd_curl(const VectorField& f, const Vec3& x, double h) {
  const Vec3 dx = fd_partial(f, x, 0, h);
  const Vec3 dy = fd_partial(f, x, 1, h);
  const Vec3 dz = fd_partial(f, x, 2, h);
  return {dy[2] - dz[1], dz[0] - dx[2], dx[1] - dy[0]};
}

HarmonicForm discrete_harmonic_form(const Mesh& mesh, const DofMaps& dofs, const SystemMatrices& matrices,
                                    const SolverOptions& cg) {
  HarmonicForm hf;
  hf.nodal.assign(mesh.num_vertices(), 0.0);
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
    if (mesh.vertex_tag[v] == BoundaryTag::GammaI) hf.nodal[v] = 1.0;

  // Dirichlet lifting: move the boundary columns of the full stiffness to the right side.
  const SparseMatrix full = assemble_stiffness_full(mesh);
  const auto lifted = full * hf.nodal;
  std::vector<double> load(dofs.num_vertex_dofs());
  for (std::size_t i = 0; i < load.size(); ++i) load[i] = -lifted[dofs.vertex_entity[i]];

  std::vector<double> interior(load.size(), 0.0);
  const auto res = cg_solve(matrices.L_v, load, interior, cg);
  hf.cg_iterations = res.iterations;
  hf.interior_relative_residual = res.relative_residual;
  for (std::size_t i = 0; i < interior.size(); ++i) hf.nodal[dofs.vertex_entity[i]] = interior[i];

  hf.edge_gradient.resize(dofs.num_edge_dofs());
  for (std::size_t k = 0; k < dofs.num_edge_dofs(); ++k) {
    const auto& ev = mesh.edges[dofs.edge_entity[k]];
    hf.edge_gradient[k] = hf.nodal[ev[1]] - hf.nodal[ev[0]];
  }
  return hf;
}

ProjectionResult project_initial_E(std::span<const double> E_tilde, const SystemMatrices& matrices,
                                   const IncidenceMatrices& d, const HarmonicForm& harmonic,
                                   const SolverOptions& cg) {
  const SparseMatrix& Me = matrices.M_e;
  const SparseMatrix Gt = d.grad.transpose();
  ProjectionResult out;
  out.E.assign(E_tilde.begin(), E_tilde.end());

  // (grad s, grad q) = (E~, grad q) for all vertex DoFs q.
  const auto MeE = Me * out.E;
  const auto rhs = Gt * MeE;
  std::vector<double> s(rhs.size(), 0.0);
  out.cg_iterations = cg_solve(matrices.L_v, rhs, s, cg).iterations;
  const auto grad_s = d.grad * s;
  for (std::size_t i = 0; i < out.E.size(); ++i) out.E[i] -= grad_s[i];

  const auto& g = harmonic.edge_gradient;
  const auto Meg = Me * g;
  const double gg = dot(g, Meg);
  if (gg > 0.0) {
    const double c = dot(out.E, Meg) / gg;
    for (std::size_t i = 0; i < out.E.size(); ++i) out.E[i] -= c * g[i];
  }

  const auto MeE0 = Me * out.E;
  const double scale = norm2(MeE0);
  if (scale > 0.0) {
    out.gradient_residual = norm2(Gt * MeE0) / scale;
    out.harmonic_residual = std::abs(dot(g, MeE0)) / scale;
  }
  return out;
}

std::vector<double> initial_B(std::span<const double> E0, double r, const IncidenceMatrices& d) {
  if (r == 0.0) throw std::domain_error("decay rate r must be nonzero");
  auto B = d.curl * E0;
  for (auto& b : B) b *= -1.0 / r;
  return B;
}

}  // namespace ads
