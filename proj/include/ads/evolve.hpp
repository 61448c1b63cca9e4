#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ads/assembly.hpp"
#include "ads/derham.hpp"
#include "ads/sparse.hpp"

namespace ads {

inline constexpr SolverOptions kMinresDefaults{.tolerance = 1e-10};

/// Crank-Nicolson operators for M u' = -(A + Z) u, with u = (E, B, p).
///
/// Both operators are stored after left multiplication by J = diag(I, -I, -I):
///   lhs = J (M / tau + (A + Z) / 2)   (symmetric)
///   rhs = J (M / tau - (A + Z) / 2)
///
/// With `eliminate_b`, steps solve the (E, p) system left after substituting
/// B_next = B - (tau/2) D (E + E_next):
///   [ M_e/tau + Z/2 + (tau/4) D^T M_f D    M_e G / 2 ]
///   [ G^T M_e / 2                          -M_v/tau  ]
struct EvolutionOperator {
  SparseMatrix lhs;
  SparseMatrix rhs;
  SparseMatrix reduced;  // empty unless eliminate_b
  SparseMatrix curl;     // D_curl, for recovering B
  double tau = 0.0;
  double gamma = 0.0;
  bool impedance = true;
  bool eliminate_b = false;
  std::size_t n_edge = 0, n_face = 0, n_vertex = 0;

  BlockVector make_state() const { return BlockVector(n_edge, n_face, n_vertex); }
};

/// Skew generator A (without Z):
///   [ 0            -D^T M_f     M_e G ]
///   [ M_f D         0           0     ]
///   [ -G^T M_e      0           0     ]
/// with G = D_grad and D = D_curl.
SparseMatrix skew_operator(const SystemMatrices& m, const IncidenceMatrices& d);

/// Block diagonal mass diag(M_e, M_f, M_v).
SparseMatrix block_mass(const SystemMatrices& m);

/// Throws std::invalid_argument for tau <= 0. With `impedance` false, Z is dropped.
EvolutionOperator build_operator(const SystemMatrices& m, const IncidenceMatrices& d, double tau,
                                 bool impedance = true, bool eliminate_b = false);

struct StepResult {
  BlockVector u;
  SolverResult solve;
};

/// One Crank-Nicolson step solved by MINRES (default tolerance 1e-10),
/// warm-started from u_prev. solve.relative_residual is always measured on
/// the full system lhs u = rhs u_prev.
StepResult cn_step(const EvolutionOperator& op, const BlockVector& u_prev,
                   const SolverOptions& minres = kMinresDefaults);

struct StepRecord {
  std::size_t step = 0;
  double time = 0.0;
  double E_norm = 0.0;  // sqrt(E^T M_e E)
  double B_norm = 0.0;
  double p_norm = 0.0;
  double energy = 0.0;  // E_norm^2 + B_norm^2
  std::size_t minres_iterations = 0;
  double div_residual = 0.0;       // ||D_grad^T M_e E||
  double harmonic_residual = 0.0;  // |g_h^T M_e E|
};

struct SimReport {
  std::vector<StepRecord> records;
  double initial_ME_norm = 0.0;  // ||M_e E_0||
};

struct SimulationInputs {
  const SystemMatrices* matrices = nullptr;
  const IncidenceMatrices* incidence = nullptr;
  /// g_h on edge DoFs, for the harmonic drift column; may be empty.
  std::span<const double> harmonic_gradient;
};

/// Step count `steps` from `u0`; one record per step including step 0.
/// Solver failures are rethrown with the step index attached.
SimReport run_simulation(const EvolutionOperator& op, const SimulationInputs& in, BlockVector u0, std::size_t steps,
                         const SolverOptions& minres = kMinresDefaults,
                         std::vector<BlockVector>* trajectory = nullptr);

struct LemmaThresholds {
  double pressure = 1e-8;    // relative to ||E_0||_{M_e}
  double divergence = 1e-7;  // relative to ||M_e E_0||
  double harmonic = 1e-7;    // relative to ||M_e E_0||
};

struct LemmaDiagnostics {
  bool passed = true;
  double max_pressure_ratio = 0.0;
  double max_divergence_ratio = 0.0;
  double max_harmonic_ratio = 0.0;
  std::string message;
};

/// p_k stays zero and E_k stays discretely divergence-free and g_h-orthogonal.
LemmaDiagnostics lemma_monitor(const SimReport& report, const LemmaThresholds& thresholds = {});

}  // namespace ads
