#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ads {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing within
/// each row; explicit zeros produced by cancellation are kept.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  /// Duplicate entries are summed in the order they appear in `triplets`.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_offsets() const { return row_ptr_; }
  std::span<const int> col_indices() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  /// Stored value at (i, j), or 0 when the entry is not in the pattern.
  double coeff(std::size_t i, std::size_t j) const;

  /// y = A x, summed left to right within each row.
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;

  SparseMatrix transpose() const;
  SparseMatrix scaled(double s) const;
  std::vector<double> diagonal_values() const;

  /// Exact structural and numerical symmetry of the stored entries.
  bool is_symmetric() const;
  /// Largest |A_ij - A_ji| over the stored entries of both.
  double max_asymmetry() const;

  /// Write "row col value" lines (%.17g) preceded by a "# rows cols nnz" header.
  void write_triplets(std::ostream& out) const;
  static SparseMatrix read_triplets(std::istream& in);

  std::vector<Triplet> to_triplets() const;

 private:
  friend SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix add(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Sparse product a * b.
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
/// alpha * a + beta * b on the union pattern.
SparseMatrix add(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b);

/// One block of a block matrix: `scale * matrix` placed at (block_row, block_col).
struct Block {
  int block_row;
  int block_col;
  const SparseMatrix* matrix;
  double scale = 1.0;
};

/// Assemble a block matrix with the given row and column block sizes.
SparseMatrix assemble_blocks(std::span<const std::size_t> row_sizes, std::span<const std::size_t> col_sizes,
                             std::span<const Block> blocks);

/// Contiguous (E, B, p) state with recorded block offsets.
class BlockVector {
 public:
  BlockVector() = default;
  BlockVector(std::size_t n_edge, std::size_t n_face, std::size_t n_vertex)
      : data_(n_edge + n_face + n_vertex, 0.0), n_edge_(n_edge), n_face_(n_face) {}

  std::size_t size() const { return data_.size(); }
  std::span<double> all() { return data_; }
  std::span<const double> all() const { return data_; }

  std::span<double> E() { return std::span(data_).subspan(0, n_edge_); }
  std::span<double> B() { return std::span(data_).subspan(n_edge_, n_face_); }
  std::span<double> p() { return std::span(data_).subspan(n_edge_ + n_face_); }
  std::span<const double> E() const { return std::span(data_).subspan(0, n_edge_); }
  std::span<const double> B() const { return std::span(data_).subspan(n_edge_, n_face_); }
  std::span<const double> p() const { return std::span(data_).subspan(n_edge_ + n_face_); }

  std::size_t edge_offset() const { return 0; }
  std::size_t face_offset() const { return n_edge_; }
  std::size_t vertex_offset() const { return n_edge_ + n_face_; }

 private:
  std::vector<double> data_;
  std::size_t n_edge_ = 0;
  std::size_t n_face_ = 0;
};

// Dense vector helpers.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// sqrt(x^T A x)
double energy_norm(const SparseMatrix& a, std::span<const double> x);

struct SolverOptions {
  double tolerance = 1e-12;
  /// 0 selects 10 * n.
  std::size_t max_iterations = 0;
  bool jacobi = false;
  bool record_history = false;
};

struct SolverResult {
  std::size_t iterations = 0;
  /// Final true relative residual ||b - A x|| / ||b||.
  double relative_residual = 0.0;
  /// Residual norm estimates per iteration, when requested.
  std::vector<double> history;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::size_t iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
  std::size_t iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

/// Conjugate gradients for SPD `a`. `x` holds the initial guess on entry.
SolverResult cg_solve(const SparseMatrix& a, std::span<const double> b, std::span<double> x,
                      const SolverOptions& opts = {});

/// MINRES for symmetric, possibly indefinite `a`. The optional Jacobi
/// preconditioner uses |diag(a)|. `x` holds the initial guess on entry.
SolverResult minres_solve(const SparseMatrix& a, std::span<const double> b, std::span<double> x,
                          const SolverOptions& opts = {});

}  // namespace ads
