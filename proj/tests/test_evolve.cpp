#include <doctest.h>

#include <random>

#include "ads/evolve.hpp"
#include "ads/pipeline.hpp"

using namespace ads;

namespace {

std::vector<double> random_vector(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double max_abs(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

const Discretization& disc3() {
  static const Discretization d = [] {
    SimConfig c;
    return Discretization::build(c);
  }();
  return d;
}

SparseMatrix sign_matrix(const EvolutionOperator& op) {
  std::vector<double> s(op.n_edge + op.n_face + op.n_vertex, -1.0);
  std::fill_n(s.begin(), op.n_edge, 1.0);
  return SparseMatrix::diagonal(s);
}

}  // namespace

TEST_SUITE("evolve") {
  TEST_CASE("generator is skew") {
    const auto& d = disc3();
    const auto A = skew_operator(d.matrices, d.incidence);
    const auto sum = add(1.0, A, 1.0, A.transpose());
    CHECK(max_abs(sum.values()) <= 1e-14 * max_abs(A.values()));
    std::mt19937 rng(1);
    for (int k = 0; k < 20; ++k) {
      const auto u = random_vector(rng, A.rows());
      CHECK(std::abs(dot(u, A * u)) <= 1e-12 * dot(u, u) * max_abs(A.values()));
    }
  }

  TEST_CASE("block mass") {
    const auto& d = disc3();
    const auto M = block_mass(d.matrices);
    CHECK(M.rows() == d.dofs.num_edge_dofs() + d.dofs.num_face_dofs() + d.dofs.num_vertex_dofs());
    CHECK(M.is_symmetric());
    const auto ne = d.dofs.num_edge_dofs(), nf = d.dofs.num_face_dofs();
    CHECK(M.coeff(0, 0) == d.matrices.M_e.coeff(0, 0));
    CHECK(M.coeff(ne, ne) == d.matrices.M_f.coeff(0, 0));
    CHECK(M.coeff(ne + nf, ne + nf) == d.matrices.M_v.coeff(0, 0));
  }

  TEST_CASE("Crank-Nicolson operators") {
    const auto& d = disc3();
    const double tau = 0.1;
    for (bool imp : {true, false}) {
      const auto op = build_operator(d.matrices, d.incidence, tau, imp);
      CHECK(op.lhs.max_asymmetry() <= 1e-15 * max_abs(op.lhs.values()));
      // Undo the sign flip, then lhs + rhs = 2 M / tau and lhs - rhs = A + Z.
      const auto S = sign_matrix(op);
      const auto L = multiply(S, op.lhs), R = multiply(S, op.rhs);
      const auto M = block_mass(d.matrices);
      CHECK(max_abs(add(1.0, add(1.0, L, 1.0, R), -2.0 / tau, M).values()) <= 1e-13 * max_abs(L.values()));
      auto AZ = skew_operator(d.matrices, d.incidence);
      if (imp) {
        const std::vector<std::size_t> sizes{d.dofs.num_edge_dofs(), d.dofs.num_face_dofs(), d.dofs.num_vertex_dofs()};
        const std::vector<Block> z{{0, 0, &d.matrices.Z_e, 1.0}};
        AZ = add(1.0, AZ, 1.0, assemble_blocks(sizes, sizes, z));
      }
      CHECK(max_abs(add(1.0, add(1.0, L, -1.0, R), -1.0, AZ).values()) <= 1e-13 * max_abs(L.values()));
    }
    CHECK_THROWS_AS(build_operator(d.matrices, d.incidence, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_operator(d.matrices, d.incidence, -0.1), std::invalid_argument);
  }

  TEST_CASE("zero state stays zero") {
    const auto& d = disc3();
    const auto op = build_operator(d.matrices, d.incidence, 0.1);
    const auto u0 = op.make_state();
    const auto step = cn_step(op, u0);
    CHECK(step.solve.iterations == 0);
    CHECK(max_abs(step.u.all()) == 0.0);
  }

  TEST_CASE("step residual meets the solver tolerance") {
    const auto& d = disc3();
    const auto op = build_operator(d.matrices, d.incidence, 0.1);
    auto u0 = op.make_state();
    std::mt19937 rng(2);
    const auto r = random_vector(rng, u0.size());
    std::copy(r.begin(), r.end(), u0.all().begin());
    const auto step = cn_step(op, u0);
    const auto rhs = op.rhs * u0.all();
    auto res = op.lhs * step.u.all();
    for (std::size_t i = 0; i < res.size(); ++i) res[i] -= rhs[i];
    CHECK(norm2(res) <= 1.01e-10 * norm2(rhs));
  }

  TEST_CASE("eliminating B gives the same step") {
    const auto& d = disc3();
    for (bool imp : {true, false}) {
      const auto full = build_operator(d.matrices, d.incidence, 0.1, imp);
      const auto red = build_operator(d.matrices, d.incidence, 0.1, imp, true);
      CHECK(red.reduced.rows() == d.dofs.num_edge_dofs() + d.dofs.num_vertex_dofs());
      CHECK(red.reduced.max_asymmetry() <= 1e-14 * max_abs(red.reduced.values()));
      auto u0 = full.make_state();
      std::mt19937 rng(3);
      const auto r = random_vector(rng, u0.size());
      std::copy(r.begin(), r.end(), u0.all().begin());
      const auto a = cn_step(full, u0);
      const auto b = cn_step(red, u0);
      CHECK(b.solve.relative_residual <= 1e-10);
      CHECK(b.solve.iterations < a.solve.iterations);
      std::vector<double> diff(u0.size());
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.u.all()[i] - b.u.all()[i];
      const auto M = block_mass(d.matrices);
      CHECK(energy_norm(M, diff) <= 1e-8 * energy_norm(M, a.u.all()));
    }
    const auto red = build_operator(d.matrices, d.incidence, 0.1, true, true);
    const auto z = cn_step(red, red.make_state());
    CHECK(max_abs(z.u.all()) == 0.0);
  }

  TEST_CASE("runs with and without B elimination agree") {
    SimConfig c;
    c.steps = 10;
    const auto a = run_pipeline(disc3(), c);
    c.eliminate_b = true;
    const auto b = run_pipeline(disc3(), c);
    REQUIRE(a.report.records.size() == b.report.records.size());
    for (std::size_t k = 0; k < a.report.records.size(); ++k) {
      CHECK(b.report.records[k].E_norm == doctest::Approx(a.report.records[k].E_norm).epsilon(1e-8));
      CHECK(b.report.records[k].B_norm == doctest::Approx(a.report.records[k].B_norm).epsilon(1e-8));
    }
    CHECK(b.lemma.passed);
  }

  TEST_CASE("energy is conserved without impedance") {
    SimConfig c;
    c.steps = 10;
    c.zero_impedance = true;
    const auto run = run_pipeline(disc3(), c);
    const double e0 = run.report.records.front().energy;
    for (const auto& r : run.report.records) CHECK(std::abs(r.energy - e0) <= 1e-8 * e0);
    CHECK(run.lemma.passed);
  }

  TEST_CASE("energy decreases with impedance and the lemma holds") {
    SimConfig c;
    c.steps = 10;
    const auto run = run_pipeline(disc3(), c);
    const auto& rec = run.report.records;
    REQUIRE(rec.size() == 11);
    for (std::size_t k = 1; k < rec.size(); ++k) CHECK(rec[k].energy <= rec[k - 1].energy * (1 + 1e-8));
    CHECK(rec.back().energy < 0.5 * rec.front().energy);
    CHECK(run.lemma.passed);
    CHECK(run.lemma.max_pressure_ratio <= 1e-8);
    CHECK(run.lemma.max_divergence_ratio <= 1e-7);
    CHECK(run.lemma.max_harmonic_ratio <= 1e-7);
  }

  TEST_CASE("negative control trips the monitor") {
    SimConfig c;
    c.steps = 5;
    c.negative_control = true;
    const auto run = run_pipeline(disc3(), c);
    CHECK_FALSE(run.lemma.passed);
    CHECK(run.lemma.max_pressure_ratio > 1e-3);
    CHECK_FALSE(run.lemma.message.empty());
  }

  TEST_CASE("monitor thresholds") {
    SimReport rep;
    rep.initial_ME_norm = 1.0;
    StepRecord r;
    r.E_norm = 1.0;
    rep.records.push_back(r);
    CHECK(lemma_monitor(rep).passed);
    r.step = 1;
    r.p_norm = 2e-8;
    rep.records.push_back(r);
    CHECK_FALSE(lemma_monitor(rep).passed);
    rep.records.back().p_norm = 0.0;
    rep.records.back().div_residual = 2e-7;
    CHECK_FALSE(lemma_monitor(rep).passed);
    rep.records.back().div_residual = 0.0;
    rep.records.back().harmonic_residual = 2e-7;
    CHECK_FALSE(lemma_monitor(rep).passed);
  }
}
