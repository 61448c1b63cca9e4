#include "ads/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ads {

void SimConfig::validate() const {
  if (J < 2) throw std::invalid_argument("J must be at least 2");
  if (J > 7) throw std::invalid_argument("J above 7 is not supported");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
  if (steps < 0) throw std::invalid_argument("steps must be non-negative");
  if (!(cg_tolerance > 0.0 && cg_tolerance < 1.0)) throw std::invalid_argument("cg tolerance must lie in (0, 1)");
  if (!(minres_tolerance > 0.0 && minres_tolerance < 1.0))
    throw std::invalid_argument("minres tolerance must lie in (0, 1)");
}

Discretization Discretization::build(const SimConfig& config) {
  config.validate();
  Discretization d;
  d.mesh = build_shell_mesh(LatticeSpec{.J = config.J});
  d.dofs = enumerate_dofs(d.mesh);
  d.incidence = ads::incidence(d.mesh, d.dofs);
  d.matrices = assemble_system(d.mesh, d.dofs, config.gamma);
  d.harmonic = discrete_harmonic_form(d.mesh, d.dofs, d.matrices, config.cg_options());
  d.ads = AdsParameters::from_gamma(config.gamma);
  return d;
}

InitialData make_initial_data(const Discretization& disc, const SimConfig& config) {
  InitialData init;
  const double r = disc.ads.r;
  init.E_interpolant =
      interpolate_edge_field([r](const Vec3& x) { return eval_E_star(0.0, x, r); }, disc.mesh, disc.dofs);
  if (config.negative_control) {
    init.projection.E = init.E_interpolant;
  } else {
    init.projection = project_initial_E(init.E_interpolant, disc.matrices, disc.incidence, disc.harmonic,
                                        config.cg_options());
  }
  const auto B0 = initial_B(init.projection.E, r, disc.incidence);
  init.u0 = BlockVector(disc.dofs.num_edge_dofs(), disc.dofs.num_face_dofs(), disc.dofs.num_vertex_dofs());
  std::copy(init.projection.E.begin(), init.projection.E.end(), init.u0.E().begin());
  std::copy(B0.begin(), B0.end(), init.u0.B().begin());
  return init;
}

RunResult run_pipeline(const Discretization& disc, const SimConfig& config) {
  config.validate();
  const auto init = make_initial_data(disc, config);
  const auto op = build_operator(disc.matrices, disc.incidence, config.tau, !config.zero_impedance, config.eliminate_b);
  const SimulationInputs in{&disc.matrices, &disc.incidence, disc.harmonic.edge_gradient};
  std::vector<BlockVector> trajectory;
  RunResult out;
  out.report = run_simulation(op, in, init.u0, static_cast<std::size_t>(config.steps), config.minres_options(),
                              &trajectory);
  out.lemma = lemma_monitor(out.report);
  out.final_state = std::move(trajectory.back());
  return out;
}

void write_csv(const SimReport& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  char buf[256];
  for (const auto& r : report.records) {
    std::snprintf(buf, sizeof buf, "%zu,%.6e,%.6e,%.6e,%.6e,%.6e,%zu,%.6e\n", r.step, r.time, r.E_norm, r.B_norm,
                  r.p_norm, r.energy, r.minres_iterations, r.div_residual);
    out << buf;
  }
}

void write_console_table(const SimReport& report, std::ostream& out) {
  out << "Step   ||E||    ||B||\n";
  char buf[64];
  for (const auto& r : report.records) {
    std::snprintf(buf, sizeof buf, "%4zu  %6.3f   %6.3f\n", r.step, r.E_norm, r.B_norm);
    out << buf;
  }
}

std::vector<ConvergenceRow> convergence_sweep(const SimConfig& base, const std::vector<int>& levels,
                                              std::ostream* log) {
  std::vector<ConvergenceRow> rows;
  for (int J : levels) {
    ConvergenceRow row;
    row.J = J;
    row.h = std::ldexp(1.0, -J);
    try {
      SimConfig cfg = base;
      cfg.J = J;
      const auto disc = Discretization::build(cfg);
      const auto run = run_pipeline(disc, cfg);
      row.final_energy = run.report.records.back().energy;
      if (log) *log << "J=" << J << " final energy " << *row.final_energy << '\n';
    } catch (const std::exception& e) {
      row.error = e.what();
      if (log) *log << "J=" << J << " failed: " << e.what() << '\n';
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
  out << "J,h,inv_h,final_energy\n";
  char buf[128];
  for (const auto& r : rows) {
    if (r.final_energy)
      std::snprintf(buf, sizeof buf, "%d,%.6e,%d,%.6e\n", r.J, r.h, 1 << r.J, *r.final_energy);
    else
      std::snprintf(buf, sizeof buf, "%d,%.6e,%d,nan\n", r.J, r.h, 1 << r.J);
    out << buf;
  }
}

}  // namespace ads
