#include "ads/evolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ads {

namespace {

std::array<std::size_t, 3> block_sizes(const SystemMatrices& m) { return {m.M_e.rows(), m.M_f.rows(), m.M_v.rows()}; }

}  // namespace

SparseMatrix skew_operator(const SystemMatrices& m, const IncidenceMatrices& d) {
  const SparseMatrix P = multiply(m.M_f, d.curl);
  const SparseMatrix Q = multiply(m.M_e, d.grad);
  const SparseMatrix Pt = P.transpose();
  const SparseMatrix Qt = Q.transpose();
  const auto sizes = block_sizes(m);
  const std::array<Block, 4> blocks{{{0, 1, &Pt, -1.0}, {0, 2, &Q, 1.0}, {1, 0, &P, 1.0}, {2, 0, &Qt, -1.0}}};
  return assemble_blocks(sizes, sizes, blocks);
}

SparseMatrix block_mass(const SystemMatrices& m) {
  const auto sizes = block_sizes(m);
  const std::array<Block, 3> blocks{{{0, 0, &m.M_e, 1.0}, {1, 1, &m.M_f, 1.0}, {2, 2, &m.M_v, 1.0}}};
  return assemble_blocks(sizes, sizes, blocks);
}

EvolutionOperator build_operator(const SystemMatrices& m, const IncidenceMatrices& d, double tau, bool impedance,
                                 bool eliminate_b) {
  if (!(tau > 0.0)) throw std::invalid_argument("time step tau must be positive");
  const SparseMatrix P = multiply(m.M_f, d.curl);  // face x edge
  const SparseMatrix Q = multiply(m.M_e, d.grad);  // edge x vertex
  const SparseMatrix Pt = P.transpose();
  const SparseMatrix Qt = Q.transpose();
  const double zs = impedance ? 0.5 : 0.0;
  const SparseMatrix lhs_ee = add(1.0 / tau, m.M_e, zs, m.Z_e);
  const SparseMatrix rhs_ee = add(1.0 / tau, m.M_e, -zs, m.Z_e);
  const auto sizes = block_sizes(m);
  const double it = 1.0 / tau;

  // The (0,1)/(1,0) and (0,2)/(2,0) pairs are explicit transposes of each
  // other, so the symmetric left-hand side is symmetric bit for bit.
  const std::array<Block, 7> lhs{{{0, 0, &lhs_ee, 1.0},
                                  {0, 1, &Pt, -0.5},
                                  {0, 2, &Q, 0.5},
                                  {1, 0, &P, -0.5},
                                  {1, 1, &m.M_f, -it},
                                  {2, 0, &Qt, 0.5},
                                  {2, 2, &m.M_v, -it}}};
  const std::array<Block, 7> rhs{{{0, 0, &rhs_ee, 1.0},
                                  {0, 1, &Pt, 0.5},
                                  {0, 2, &Q, -0.5},
                                  {1, 0, &P, 0.5},
                                  {1, 1, &m.M_f, -it},
                                  {2, 0, &Qt, -0.5},
                                  {2, 2, &m.M_v, -it}}};

  EvolutionOperator op;
  op.lhs = assemble_blocks(sizes, sizes, lhs);
  op.rhs = assemble_blocks(sizes, sizes, rhs);
  op.tau = tau;
  op.gamma = m.gamma;
  op.impedance = impedance;
  op.n_edge = sizes[0];
  op.n_face = sizes[1];
  op.n_vertex = sizes[2];
  if (eliminate_b) {
    op.eliminate_b = true;
    op.curl = d.curl;
    const SparseMatrix curl_curl = multiply(Pt, d.curl);
    const SparseMatrix s_ee = add(1.0, lhs_ee, tau / 4.0, curl_curl);
    const std::array<std::size_t, 2> rsizes{sizes[0], sizes[2]};
    const std::array<Block, 4> red{{{0, 0, &s_ee, 1.0}, {0, 1, &Q, 0.5}, {1, 0, &Qt, 0.5}, {1, 1, &m.M_v, -it}}};
    op.reduced = assemble_blocks(rsizes, rsizes, red);
  }
  return op;
}

StepResult cn_step(const EvolutionOperator& op, const BlockVector& u_prev, const SolverOptions& minres) {
  if (u_prev.size() != op.lhs.rows()) throw std::invalid_argument("state size does not match the operator");
  for (double v : u_prev.all())
    if (!std::isfinite(v)) throw std::invalid_argument("state contains non-finite values");
  const auto b = op.rhs * u_prev.all();
  StepResult out{u_prev, {}};
  if (!op.eliminate_b) {
    out.solve = minres_solve(op.lhs, b, out.u.all(), minres);
    return out;
  }

  const std::size_t ne = op.n_edge, nf = op.n_face, nv = op.n_vertex;
  const double h = 0.5 * op.tau;
  // b holds (f_E, -f_B, -f_p); the reduced right-hand side is
  // (f_E + (tau/2) D^T f_B, f_p) with the p row negated.
  const auto b_face = std::span<const double>(b).subspan(ne, nf);
  const auto Dt_bB = op.curl.transpose() * b_face;
  std::vector<double> rb(ne + nv), x(ne + nv);
  for (std::size_t i = 0; i < ne; ++i) rb[i] = b[i] - h * Dt_bB[i];
  for (std::size_t i = 0; i < nv; ++i) rb[ne + i] = b[ne + nf + i];
  std::copy(u_prev.E().begin(), u_prev.E().end(), x.begin());
  std::copy(u_prev.p().begin(), u_prev.p().end(), x.begin() + ne);
  out.solve = minres_solve(op.reduced, rb, x, minres);

  std::vector<double> e_sum(ne);
  for (std::size_t i = 0; i < ne; ++i) e_sum[i] = u_prev.E()[i] + x[i];
  const auto d_e = op.curl * e_sum;
  std::copy(x.begin(), x.begin() + ne, out.u.E().begin());
  for (std::size_t i = 0; i < nf; ++i) out.u.B()[i] = u_prev.B()[i] - h * d_e[i];
  std::copy(x.begin() + ne, x.end(), out.u.p().begin());

  auto r = op.lhs * out.u.all();
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  const double bn = norm2(b);
  out.solve.relative_residual = bn > 0.0 ? norm2(r) / bn : norm2(r);
  return out;
}

namespace {

StepRecord measure(std::size_t k, double tau, const BlockVector& u, const SimulationInputs& in,
                   const SparseMatrix& Gt) {
  const auto& m = *in.matrices;
  StepRecord r;
  r.step = k;
  r.time = static_cast<double>(k) * tau;
  const auto MeE = m.M_e * u.E();
  r.E_norm = std::sqrt(std::max(0.0, dot(u.E(), MeE)));
  r.B_norm = energy_norm(m.M_f, u.B());
  r.p_norm = energy_norm(m.M_v, u.p());
  r.energy = r.E_norm * r.E_norm + r.B_norm * r.B_norm;
  r.div_residual = norm2(Gt * MeE);
  if (!in.harmonic_gradient.empty()) r.harmonic_residual = std::abs(dot(in.harmonic_gradient, MeE));
  return r;
}

}  // namespace

SimReport run_simulation(const EvolutionOperator& op, const SimulationInputs& in, BlockVector u0, std::size_t steps,
                         const SolverOptions& minres, std::vector<BlockVector>* trajectory) {
  if (!in.matrices || !in.incidence) throw std::invalid_argument("simulation inputs are incomplete");
  SimReport report;
  report.initial_ME_norm = norm2(in.matrices->M_e * u0.E());
  const SparseMatrix Gt = in.incidence->grad.transpose();
  report.records.push_back(measure(0, op.tau, u0, in, Gt));
  if (trajectory) trajectory->push_back(u0);
  BlockVector u = std::move(u0);
  for (std::size_t k = 1; k <= steps; ++k) {
    StepResult step;
    try {
      step = cn_step(op, u, minres);
    } catch (const SolverError& e) {
      throw SolverError("step " + std::to_string(k) + ": " + e.what(), e.iterations(), e.residual());
    }
    u = std::move(step.u);
    auto rec = measure(k, op.tau, u, in, Gt);
    rec.minres_iterations = step.solve.iterations;
    report.records.push_back(rec);
    if (trajectory) trajectory->push_back(u);
  }
  return report;
}

LemmaDiagnostics lemma_monitor(const SimReport& report, const LemmaThresholds& th) {
  LemmaDiagnostics d;
  if (report.records.empty()) return d;
  const double e0 = report.records.front().E_norm;
  const double me0 = report.initial_ME_norm;
  if (e0 == 0.0 || me0 == 0.0) {
    // Zero data: every monitored quantity must vanish identically.
    for (const auto& r : report.records)
      if (r.p_norm != 0.0 || r.div_residual != 0.0 || r.harmonic_residual != 0.0) d.passed = false;
    d.message = d.passed ? "zero initial data" : "nonzero state from zero initial data";
    return d;
  }
  for (const auto& r : report.records) {
    d.max_pressure_ratio = std::max(d.max_pressure_ratio, r.p_norm / e0);
    d.max_divergence_ratio = std::max(d.max_divergence_ratio, r.div_residual / me0);
    d.max_harmonic_ratio = std::max(d.max_harmonic_ratio, r.harmonic_residual / me0);
  }
  std::ostringstream msg;
  if (d.max_pressure_ratio > th.pressure) {
    d.passed = false;
    msg << "p_k nonzero (max ||p||/||E_0|| = " << d.max_pressure_ratio << "); ";
  }
  if (d.max_divergence_ratio > th.divergence) {
    d.passed = false;
    msg << "E_k not divergence-free (max ratio " << d.max_divergence_ratio << "); ";
  }
  if (d.max_harmonic_ratio > th.harmonic) {
    d.passed = false;
    msg << "E_k drifts toward grad h (max ratio " << d.max_harmonic_ratio << "); ";
  }
  d.message = msg.str();
  if (d.passed)
    d.message = "ok";
  else
    d.message.resize(d.message.size() - 2);
  return d;
}

}  // namespace ads
