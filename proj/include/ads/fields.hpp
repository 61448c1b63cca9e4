#pragma once

#include <span>
#include <vector>

#include "ads/assembly.hpp"
#include "ads/derham.hpp"
#include "ads/geometry.hpp"
#include "ads/mesh.hpp"
#include "ads/sparse.hpp"

namespace ads {

/// Decay rate of the asymptotically disappearing solution for impedance gamma:
/// r = (1 - sqrt(1 + 4/gamma)) / 2 < 0.
double r_of_gamma(double gamma);

struct AdsParameters {
  double gamma;
  double r;

  static AdsParameters from_gamma(double gamma) { return {gamma, r_of_gamma(gamma)}; }
};

/// Exact electric field, defined for |x| >= 1:
///   E*(t, x) = e^{r(|x| + t)} / |x|^2 (r^2 - r/|x|) (0, z, -y).
Vec3 eval_E_star(double t, const Vec3& x, double r);

/// Exact magnetic field, B* = -curl E* / r. The constant x-term is
/// e^{r(|x| + t)} (2r/|x|^2 - 2/|x|^3).
Vec3 eval_B_star(double t, const Vec3& x, double r);

/// (1 + gamma) E*_tan + n x B*_tan at a point of the unit sphere, with
/// n = -x / |x| pointing out of the shell into the obstacle.
Vec3 impedance_residual(double t, const Vec3& x, double r, double gamma);

/// Central differences with step h.
double fd_divergence(const VectorField& f, const Vec3& x, double h);
Vec3 fd_curl(const VectorField& f, const Vec3& x, double h);

struct HarmonicForm {
  std::vector<double> nodal;            // every mesh vertex: 1 on GammaI, 0 on GammaO
  std::vector<double> edge_gradient;    // g_h on edge DoFs: h(head) - h(tail)
  double interior_relative_residual = 0.0;
  std::size_t cg_iterations = 0;
};

/// Piecewise-linear solution of Laplace's equation with value 1 on GammaI and
/// 0 on GammaO, solved by CG (default tolerance 1e-12).
HarmonicForm discrete_harmonic_form(const Mesh& mesh, const DofMaps& dofs, const SystemMatrices& matrices,
                                    const SolverOptions& cg = {});

struct ProjectionResult {
  std::vector<double> E;
  /// ||D_grad^T M_e E|| / ||M_e E||
  double gradient_residual = 0.0;
  /// |g_h^T M_e E| / ||M_e E||
  double harmonic_residual = 0.0;
  std::size_t cg_iterations = 0;
};

/// Remove the discrete gradient part and the g_h component (both in the M_e
/// inner product) from an edge vector.
ProjectionResult project_initial_E(std::span<const double> E_tilde, const SystemMatrices& matrices,
                                   const IncidenceMatrices& d, const HarmonicForm& harmonic,
                                   const SolverOptions& cg = {});

/// B_0 = -(1/r) D_curl E_0, from r B + curl E = 0 for fields decaying like e^{rt}.
std::vector<double> initial_B(std::span<const double> E0, double r, const IncidenceMatrices& d);

}  // namespace ads
