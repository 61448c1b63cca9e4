#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ads/assembly.hpp"
#include "ads/derham.hpp"
#include "ads/evolve.hpp"
#include "ads/fields.hpp"
#include "ads/mesh.hpp"

namespace ads {

/// Run configuration. The defaults reproduce the sphere-obstacle experiment:
/// J = 3, gamma = 0.05, tau = 0.1, 20 steps.
struct SimConfig {
  int J = 3;
  double gamma = 0.05;
  double tau = 0.1;
  int steps = 20;
  double cg_tolerance = 1e-12;
  double minres_tolerance = 1e-10;
  bool jacobi = false;
  bool zero_impedance = false;
  bool eliminate_b = false;  // solve the reduced (E, p) system each step
  bool negative_control = false;  // start from the unprojected interpolant
  std::string csv_path;
  std::string vtk_path;
  std::string dump_dir;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  SolverOptions cg_options() const { return {.tolerance = cg_tolerance, .jacobi = jacobi}; }
  SolverOptions minres_options() const { return {.tolerance = minres_tolerance, .jacobi = jacobi}; }
};

/// Everything between mesh construction and the first time step.
struct Discretization {
  Mesh mesh;
  DofMaps dofs;
  IncidenceMatrices incidence;
  SystemMatrices matrices;
  HarmonicForm harmonic;
  AdsParameters ads{};

  static Discretization build(const SimConfig& config);
};

struct InitialData {
  std::vector<double> E_interpolant;  // before projection
  ProjectionResult projection;
  BlockVector u0;
};

/// ADS initial state: interpolated, projected (unless negative_control), B_0 from E_0, p_0 = 0.
InitialData make_initial_data(const Discretization& disc, const SimConfig& config);

struct RunResult {
  SimReport report;
  LemmaDiagnostics lemma;
  BlockVector final_state;
};

RunResult run_pipeline(const Discretization& disc, const SimConfig& config);

inline constexpr const char* kCsvHeader = "step,time,E_L2,B_L2,p_L2,energy,minres_iters,div_residual";

void write_csv(const SimReport& report, std::ostream& out);
/// Step, ||E||, ||B|| with three decimals.
void write_console_table(const SimReport& report, std::ostream& out);

struct ConvergenceRow {
  int J = 0;
  double h = 0.0;
  std::optional<double> final_energy;  // empty when the level failed
  std::string error;
};

/// One full run per level; failing levels are reported and the rest continue.
std::vector<ConvergenceRow> convergence_sweep(const SimConfig& base, const std::vector<int>& levels,
                                              std::ostream* log = nullptr);
void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);

}  // namespace ads
