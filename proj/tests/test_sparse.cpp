#include <doctest.h>

#include <Eigen/Dense>

#include <random>
#include <sstream>

#include "ads/assembly.hpp"
#include "ads/sparse.hpp"

using namespace ads;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (const auto& t : a.to_triplets()) d(t.row, t.col) += t.value;
  return d;
}

Eigen::VectorXd as_eigen(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Random sparse matrix with roughly `per_row` entries per row.
SparseMatrix random_sparse(std::mt19937& rng, std::size_t rows, std::size_t cols, int per_row) {
  std::uniform_int_distribution<int> col(0, static_cast<int>(cols) - 1);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < rows; ++i)
    for (int k = 0; k < per_row; ++k) t.push_back({static_cast<int>(i), col(rng), val(rng)});
  return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

// B^T B + shift I, sparse and SPD.
SparseMatrix random_spd(std::mt19937& rng, std::size_t n, double shift) {
  const auto b = random_sparse(rng, n, n, 4);
  return add(1.0, multiply(b.transpose(), b), shift, SparseMatrix::identity(n));
}

std::vector<double> random_vector(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double rel_gap(std::span<const double> x, const Eigen::VectorXd& ref) {
  return (as_eigen(x) - ref).norm() / ref.norm();
}

}  // namespace

TEST_SUITE("sparse") {
  TEST_CASE("triplets with duplicates") {
    const auto a = SparseMatrix::from_triplets(2, 3, {{0, 2, 1.0}, {1, 0, 2.0}, {0, 2, 0.5}, {0, 0, -1.0}});
    CHECK(a.nnz() == 3);
    CHECK(a.coeff(0, 2) == 1.5);
    CHECK(a.coeff(0, 0) == -1.0);
    CHECK(a.coeff(1, 0) == 2.0);
    CHECK(a.coeff(1, 1) == 0.0);
    const auto cols = a.col_indices();
    CHECK(cols[0] == 0);
    CHECK(cols[1] == 2);
  }

  TEST_CASE("identity and zero products") {
    std::mt19937 rng(1);
    const auto x = random_vector(rng, 17);
    CHECK(SparseMatrix::identity(17) * x == x);
    for (double v : SparseMatrix(17, 17) * x) CHECK(v == 0.0);
  }

  TEST_CASE("products, transpose and sums against dense oracles") {
    std::mt19937 rng(2);
    const auto a = random_sparse(rng, 50, 40, 5);
    const auto b = random_sparse(rng, 40, 50, 5);
    const auto x = random_vector(rng, 40);
    CHECK(rel_gap(a * x, dense(a) * as_eigen(x)) <= 1e-14);
    CHECK((dense(multiply(a, b)) - dense(a) * dense(b)).norm() <= 1e-13 * (dense(a) * dense(b)).norm());
    CHECK(dense(a.transpose()) == dense(a).transpose());
    const auto c = random_sparse(rng, 50, 40, 3);
    CHECK((dense(add(2.0, a, -0.5, c)) - (2.0 * dense(a) - 0.5 * dense(c))).norm() <= 1e-14);
    CHECK(dense(a.scaled(3.0)) == 3.0 * dense(a));
  }

  TEST_CASE("symmetry detection") {
    std::mt19937 rng(3);
    auto s = random_spd(rng, 30, 1.0);
    CHECK(s.is_symmetric());
    CHECK(s.max_asymmetry() == 0.0);
    auto t = s.to_triplets();
    t.push_back({0, 5, 1e-9});
    const auto u = SparseMatrix::from_triplets(30, 30, t);
    CHECK_FALSE(u.is_symmetric());
    CHECK(u.max_asymmetry() == doctest::Approx(1e-9));
  }

  TEST_CASE("block assembly") {
    const auto I2 = SparseMatrix::identity(2);
    const auto D = SparseMatrix::diagonal(std::vector<double>{1.0, 2.0, 3.0});
    const std::vector<std::size_t> sizes{2, 3};
    const std::vector<Block> blocks{{0, 0, &I2, 1.0}, {1, 1, &D, -2.0}};
    const auto m = assemble_blocks(sizes, sizes, blocks);
    CHECK(m.rows() == 5);
    CHECK(m.coeff(1, 1) == 1.0);
    CHECK(m.coeff(4, 4) == -6.0);
    CHECK(m.coeff(0, 3) == 0.0);
  }

  TEST_CASE("triplet file round trip") {
    std::mt19937 rng(4);
    const auto a = random_sparse(rng, 20, 30, 4);
    std::stringstream ss;
    a.write_triplets(ss);
    const auto b = SparseMatrix::read_triplets(ss);
    CHECK(b.rows() == 20);
    CHECK(b.cols() == 30);
    CHECK(dense(a) == dense(b));
  }

  TEST_CASE("CG on small systems") {
    const auto I = SparseMatrix::identity(10);
    std::vector<double> b(10, 1.0), x(10, 0.0);
    const auto r1 = cg_solve(I, b, x);
    CHECK(r1.iterations == 1);
    CHECK(x == b);

    std::vector<double> d(10);
    for (int i = 0; i < 10; ++i) d[i] = i + 1;
    const auto D = SparseMatrix::diagonal(d);
    std::fill(x.begin(), x.end(), 0.0);
    const auto r2 = cg_solve(D, b, x);
    CHECK(r2.iterations <= 10);
    for (int i = 0; i < 10; ++i) CHECK(x[i] == doctest::Approx(1.0 / (i + 1)).epsilon(1e-12));
  }

  TEST_CASE("CG on random SPD systems against Cholesky") {
    std::mt19937 rng(5);
    for (std::size_t n : {20u, 100u, 500u}) {
      const auto a = random_spd(rng, n, 0.1);
      const auto b = random_vector(rng, n);
      const Eigen::VectorXd ref = dense(a).llt().solve(as_eigen(b));
      for (bool jacobi : {false, true}) {
        std::vector<double> x(n, 0.0);
        const auto res = cg_solve(a, b, x, {.tolerance = 1e-12, .jacobi = jacobi});
        CHECK(res.relative_residual <= 1e-12);
        CHECK(rel_gap(x, ref) <= 1e-8);
      }
    }
  }

  TEST_CASE("CG on the nodal stiffness") {
    const auto mesh = build_shell_mesh({.J = 3});
    const auto d = enumerate_dofs(mesh);
    const auto L = assemble_stiffness_nodal(mesh, d);
    std::mt19937 rng(6);
    const auto b = random_vector(rng, L.rows());
    std::vector<double> x(b.size(), 0.0);
    cg_solve(L, b, x);
    const Eigen::VectorXd ref = dense(L).llt().solve(as_eigen(b));
    CHECK(rel_gap(x, ref) <= 1e-9);
  }

  TEST_CASE("MINRES on small systems") {
    const auto I = SparseMatrix::identity(5);
    std::vector<double> b{1, 2, 3, 4, 5}, x(5, 0.0);
    CHECK(minres_solve(I, b, x).iterations == 1);
    for (int i = 0; i < 5; ++i) CHECK(x[i] == doctest::Approx(b[i]).epsilon(1e-15));

    const auto D = SparseMatrix::diagonal(std::vector<double>{1.0, -1.0});
    std::vector<double> b2{2.0, 3.0}, x2(2, 0.0);
    minres_solve(D, b2, x2);
    CHECK(x2[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(x2[1] == doctest::Approx(-3.0).epsilon(1e-12));
  }

  TEST_CASE("MINRES on an indefinite system against LU") {
    std::mt19937 rng(7);
    const std::size_t n = 80;
    const auto s = random_spd(rng, n, 0.5);
    std::vector<double> sign(n);
    for (std::size_t i = 0; i < n; ++i) sign[i] = i % 3 == 0 ? -4.0 : 1.0;
    // S + diag(sign) is symmetric with both signs in its spectrum.
    const auto a = add(1.0, s, 1.0, SparseMatrix::diagonal(sign));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense(a));
    REQUIRE(eig.eigenvalues().minCoeff() < 0.0);
    REQUIRE(eig.eigenvalues().maxCoeff() > 0.0);
    const auto b = random_vector(rng, n);
    const Eigen::VectorXd ref = dense(a).partialPivLu().solve(as_eigen(b));
    for (bool jacobi : {false, true}) {
      std::vector<double> x(n, 0.0);
      const auto res = minres_solve(a, b, x, {.tolerance = 1e-12, .jacobi = jacobi, .record_history = true});
      CHECK(res.relative_residual <= 1e-10);
      CHECK(rel_gap(x, ref) <= 1e-8);
      REQUIRE(res.history.size() >= 2);
      for (std::size_t k = 1; k < res.history.size(); ++k) CHECK(res.history[k] <= res.history[k - 1] * (1 + 1e-12));
    }
  }

  TEST_CASE("warm start and zero right-hand side") {
    std::mt19937 rng(8);
    const auto a = random_spd(rng, 40, 1.0);
    const std::vector<double> zero(40, 0.0);
    std::vector<double> x(40, 0.0);
    CHECK(minres_solve(a, zero, x).iterations == 0);
    CHECK(cg_solve(a, zero, x).iterations == 0);
    const auto b = random_vector(rng, 40);
    std::vector<double> y(40, 0.0);
    cg_solve(a, b, y);
    CHECK(minres_solve(a, b, y, {.tolerance = 1e-8}).iterations <= 1);
  }

  TEST_CASE("non-convergence raises SolverError") {
    std::mt19937 rng(9);
    const auto a = random_spd(rng, 200, 1e-3);
    const auto b = random_vector(rng, 200);
    std::vector<double> x(200, 0.0);
    CHECK_THROWS_AS(cg_solve(a, b, x, {.tolerance = 1e-14, .max_iterations = 3}), SolverError);
    std::fill(x.begin(), x.end(), 0.0);
    try {
      minres_solve(a, b, x, {.tolerance = 1e-14, .max_iterations = 3});
      FAIL("expected SolverError");
    } catch (const SolverError& e) {
      CHECK(e.iterations() == 3);
      CHECK(e.residual() > 1e-14);
    }
  }

  TEST_CASE("solves are deterministic") {
    std::mt19937 rng(10);
    const auto a = random_spd(rng, 300, 0.1);
    const auto b = random_vector(rng, 300);
    std::vector<double> x1(300, 0.0), x2(300, 0.0);
    minres_solve(a, b, x1);
    minres_solve(a, b, x2);
    CHECK(x1 == x2);
  }
}
