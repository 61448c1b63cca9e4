#include "ads/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace ads {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets)
    if (t.row < 0 || t.col < 0 || static_cast<std::size_t>(t.row) >= rows || static_cast<std::size_t>(t.col) >= cols)
      throw std::out_of_range("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                              ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
  // Counting sort by row keeps the input order inside each row.
  std::vector<std::size_t> count(rows + 1, 0);
  for (const auto& t : triplets) ++count[t.row + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<Triplet> by_row(triplets.size());
  {
    std::vector<std::size_t> next(count.begin(), count.end() - 1);
    for (const auto& t : triplets) by_row[next[t.row]++] = t;
  }
  triplets.clear();
  triplets.shrink_to_fit();

  SparseMatrix a(rows, cols);
  a.col_idx_.reserve(by_row.size());
  a.values_.reserve(by_row.size());
  std::vector<Triplet> row;
  for (std::size_t i = 0; i < rows; ++i) {
    row.assign(by_row.begin() + static_cast<std::ptrdiff_t>(count[i]),
               by_row.begin() + static_cast<std::ptrdiff_t>(count[i + 1]));
    std::stable_sort(row.begin(), row.end(), [](const Triplet& x, const Triplet& y) { return x.col < y.col; });
    for (std::size_t k = 0; k < row.size();) {
      const int c = row[k].col;
      double v = 0.0;
      for (; k < row.size() && row[k].col == c; ++k) v += row[k].value;
      a.col_idx_.push_back(c);
      a.values_.push_back(v);
    }
    a.row_ptr_[i + 1] = a.values_.size();
  }
  return a;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<double> ones(n, 1.0);
  return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d) {
  SparseMatrix a(d.size(), d.size());
  a.col_idx_.resize(d.size());
  a.values_.assign(d.begin(), d.end());
  for (std::size_t i = 0; i < d.size(); ++i) {
    a.col_idx_[i] = static_cast<int>(i);
    a.row_ptr_[i + 1] = i + 1;
  }
  return a;
}

double SparseMatrix::coeff(std::size_t i, std::size_t j) const {
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<int>(j));
  if (it == last || *it != static_cast<int>(j)) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_)
    throw std::invalid_argument("spmv dimension mismatch: " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                                " times " + std::to_string(x.size()) + " into " + std::to_string(y.size()));
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  std::vector<std::size_t> count(cols_ + 1, 0);
  for (int c : col_idx_) ++count[c + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  t.row_ptr_ = count;
  t.col_idx_.resize(nnz());
  t.values_.resize(nnz());
  std::vector<std::size_t> next(count.begin(), count.end() - 1);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::size_t dst = next[col_idx_[k]]++;
      t.col_idx_[dst] = static_cast<int>(i);
      t.values_[dst] = values_[k];
    }
  return t;
}

SparseMatrix SparseMatrix::scaled(double s) const {
  SparseMatrix a = *this;
  for (auto& v : a.values_) v *= s;
  return a;
}

std::vector<double> SparseMatrix::diagonal_values() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = coeff(i, i);
  return d;
}

double SparseMatrix::max_asymmetry() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  const SparseMatrix t = transpose();
  const SparseMatrix diff = add(1.0, *this, -1.0, t);
  double m = 0.0;
  for (double v : diff.values_) m = std::max(m, std::abs(v));
  return m;
}

bool SparseMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  const SparseMatrix t = transpose();
  return t.row_ptr_ == row_ptr_ && t.col_idx_ == col_idx_ && t.values_ == values_;
}

std::vector<Triplet> SparseMatrix::to_triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      out.push_back({static_cast<int>(i), col_idx_[k], values_[k]});
  return out;
}

void SparseMatrix::write_triplets(std::ostream& out) const {
  out << "# " << rows_ << ' ' << cols_ << ' ' << nnz() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", values_[k]);
      out << i << ' ' << col_idx_[k] << ' ' << buf << '\n';
    }
}

SparseMatrix SparseMatrix::read_triplets(std::istream& in) {
  std::size_t rows = 0, cols = 0;
  bool have_shape = false;
  std::vector<Triplet> trips;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      char hash;
      std::size_t nnz;
      if (ls >> hash >> rows >> cols >> nnz) have_shape = true;
      continue;
    }
    long long r, c;
    double v;
    if (!(ls >> r >> c >> v)) throw std::runtime_error("malformed triplet on line " + std::to_string(lineno));
    trips.push_back({static_cast<int>(r), static_cast<int>(c), v});
  }
  if (!have_shape)
    for (const auto& t : trips) {
      rows = std::max(rows, static_cast<std::size_t>(t.row) + 1);
      cols = std::max(cols, static_cast<std::size_t>(t.col) + 1);
    }
  return from_triplets(rows, cols, std::move(trips));
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("sparse product dimension mismatch");
  SparseMatrix c(a.rows_, b.cols_);
  std::vector<double> acc(b.cols_, 0.0);
  std::vector<int> marker(b.cols_, -1);
  std::vector<int> pattern;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    pattern.clear();
    for (std::size_t ka = a.row_ptr_[i]; ka < a.row_ptr_[i + 1]; ++ka) {
      const int k = a.col_idx_[ka];
      const double av = a.values_[ka];
      for (std::size_t kb = b.row_ptr_[k]; kb < b.row_ptr_[k + 1]; ++kb) {
        const int j = b.col_idx_[kb];
        if (marker[j] != static_cast<int>(i)) {
          marker[j] = static_cast<int>(i);
          pattern.push_back(j);
          acc[j] = 0.0;
        }
        acc[j] += av * b.values_[kb];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (int j : pattern) {
      c.col_idx_.push_back(j);
      c.values_.push_back(acc[j]);
    }
    c.row_ptr_[i + 1] = c.values_.size();
  }
  return c;
}

SparseMatrix add(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("sparse sum dimension mismatch");
  SparseMatrix c(a.rows_, a.cols_);
  c.col_idx_.reserve(a.nnz() + b.nnz());
  c.values_.reserve(a.nnz() + b.nnz());
  for (std::size_t i = 0; i < a.rows_; ++i) {
    std::size_t ka = a.row_ptr_[i], kb = b.row_ptr_[i];
    const std::size_t ea = a.row_ptr_[i + 1], eb = b.row_ptr_[i + 1];
    while (ka < ea || kb < eb) {
      const int ca = ka < ea ? a.col_idx_[ka] : std::numeric_limits<int>::max();
      const int cb = kb < eb ? b.col_idx_[kb] : std::numeric_limits<int>::max();
      if (ca == cb) {
        c.col_idx_.push_back(ca);
        c.values_.push_back(alpha * a.values_[ka++] + beta * b.values_[kb++]);
      } else if (ca < cb) {
        c.col_idx_.push_back(ca);
        c.values_.push_back(alpha * a.values_[ka++]);
      } else {
        c.col_idx_.push_back(cb);
        c.values_.push_back(beta * b.values_[kb++]);
      }
    }
    c.row_ptr_[i + 1] = c.values_.size();
  }
  return c;
}

SparseMatrix assemble_blocks(std::span<const std::size_t> row_sizes, std::span<const std::size_t> col_sizes,
                             std::span<const Block> blocks) {
  std::vector<std::size_t> row_off(row_sizes.size() + 1, 0), col_off(col_sizes.size() + 1, 0);
  std::partial_sum(row_sizes.begin(), row_sizes.end(), row_off.begin() + 1);
  std::partial_sum(col_sizes.begin(), col_sizes.end(), col_off.begin() + 1);
  std::vector<Triplet> trips;
  std::size_t total = 0;
  for (const auto& blk : blocks) total += blk.matrix->nnz();
  trips.reserve(total);
  for (const auto& blk : blocks) {
    const SparseMatrix& m = *blk.matrix;
    if (m.rows() != row_sizes[blk.block_row] || m.cols() != col_sizes[blk.block_col])
      throw std::invalid_argument("block size mismatch at (" + std::to_string(blk.block_row) + ", " +
                                  std::to_string(blk.block_col) + ")");
    const auto rp = m.row_offsets();
    const auto ci = m.col_indices();
    const auto v = m.values();
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t k = rp[i]; k < rp[i + 1]; ++k)
        trips.push_back({static_cast<int>(row_off[blk.block_row] + i), static_cast<int>(col_off[blk.block_col] + ci[k]),
                         blk.scale * v[k]});
  }
  return SparseMatrix::from_triplets(row_off.back(), col_off.back(), std::move(trips));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double energy_norm(const SparseMatrix& a, std::span<const double> x) {
  const auto ax = a * x;
  return std::sqrt(std::max(0.0, dot(x, ax)));
}

namespace {

std::size_t iteration_budget(const SolverOptions& opts, std::size_t n) {
  return opts.max_iterations ? opts.max_iterations : std::max<std::size_t>(10 * n, 10);
}

double true_residual(const SparseMatrix& a, std::span<const double> b, std::span<const double> x,
                     std::vector<double>& r) {
  a.multiply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return norm2(r);
}

std::vector<double> inverse_abs_diagonal(const SparseMatrix& a, bool jacobi) {
  std::vector<double> inv(a.rows(), 1.0);
  if (!jacobi) return inv;
  const auto d = a.diagonal_values();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0) throw std::invalid_argument("Jacobi preconditioner needs a nonzero diagonal");
    inv[i] = 1.0 / std::abs(d[i]);
  }
  return inv;
}

void check_square(const SparseMatrix& a, std::span<const double> b, std::span<const double> x) {
  if (a.rows() != a.cols() || b.size() != a.rows() || x.size() != a.rows())
    throw std::invalid_argument("solver dimension mismatch");
}

}  // namespace

SolverResult cg_solve(const SparseMatrix& a, std::span<const double> b, std::span<double> x,
                      const SolverOptions& opts) {
  check_square(a, b, x);
  const std::size_t n = a.rows();
  const std::size_t budget = iteration_budget(opts, n);
  const auto dinv = inverse_abs_diagonal(a, opts.jacobi);
  SolverResult res;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return res;
  }
  const double target = opts.tolerance * bnorm;

  std::vector<double> r(n), z(n), p(n), q(n);
  double rnorm = true_residual(a, b, x, r);
  while (rnorm > target && res.iterations < budget) {
    // Restart loop: the recursive residual drifts from the true one.
    for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    p = z;
    double rz = dot(r, z);
    while (res.iterations < budget) {
      a.multiply(p, q);
      const double pq = dot(p, q);
      if (!(pq > 0.0)) throw SolverError("CG breakdown: matrix is not positive definite", res.iterations, rnorm / bnorm);
      const double alpha = rz / pq;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * q[i];
      }
      ++res.iterations;
      rnorm = norm2(r);
      if (opts.record_history) res.history.push_back(rnorm / bnorm);
      if (rnorm <= 0.5 * target) break;
      for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    rnorm = true_residual(a, b, x, r);
  }
  res.relative_residual = rnorm / bnorm;
  if (rnorm > target)
    throw SolverError("CG did not converge in " + std::to_string(budget) + " iterations (relative residual " +
                          std::to_string(res.relative_residual) + ")",
                      res.iterations, res.relative_residual);
  return res;
}

SolverResult minres_solve(const SparseMatrix& a, std::span<const double> b, std::span<double> x,
                          const SolverOptions& opts) {
  check_square(a, b, x);
  const std::size_t n = a.rows();
  const std::size_t budget = iteration_budget(opts, n);
  const auto dinv = inverse_abs_diagonal(a, opts.jacobi);
  SolverResult res;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return res;
  }
  const double target = opts.tolerance * bnorm;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  std::vector<double> r(n), r1(n), r2(n), y(n), v(n), w(n), w1(n), w2(n);
  double rnorm = true_residual(a, b, x, r);
  int restarts = 0;
  while (rnorm > target && res.iterations < budget) {
    // Lanczos-based MINRES (Paige & Saunders) on the correction A d = r.
    r1 = r;
    r2 = r;
    for (std::size_t i = 0; i < n; ++i) y[i] = dinv[i] * r1[i];
    const double beta1 = std::sqrt(dot(r1, y));
    // In the unpreconditioned case phibar is the residual 2-norm; otherwise
    // rescale the target to the preconditioned norm.
    const double inner_target = 0.5 * target * beta1 / rnorm;
    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
    double cs = -1.0, sn = 0.0;
    std::fill(w.begin(), w.end(), 0.0);
    std::fill(w2.begin(), w2.end(), 0.0);
    std::size_t local = 0;
    while (res.iterations < budget) {
      const double s = 1.0 / beta;
      for (std::size_t i = 0; i < n; ++i) v[i] = s * y[i];
      a.multiply(v, y);
      if (local >= 1)
        for (std::size_t i = 0; i < n; ++i) y[i] -= (beta / oldb) * r1[i];
      const double alfa = dot(v, y);
      for (std::size_t i = 0; i < n; ++i) y[i] -= (alfa / beta) * r2[i];
      std::swap(r1, r2);
      r2 = y;
      for (std::size_t i = 0; i < n; ++i) y[i] = dinv[i] * r2[i];
      oldb = beta;
      beta = std::sqrt(std::max(0.0, dot(r2, y)));
      const double oldeps = epsln;
      const double delta = cs * dbar + sn * alfa;
      const double gbar = sn * dbar - cs * alfa;
      epsln = sn * beta;
      dbar = -cs * beta;
      const double gamma = std::max(std::hypot(gbar, beta), eps);
      cs = gbar / gamma;
      sn = beta / gamma;
      const double phi = cs * phibar;
      phibar = sn * phibar;
      const double denom = 1.0 / gamma;
      std::swap(w1, w2);
      std::swap(w2, w);
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) * denom;
        x[i] += phi * w[i];
      }
      ++res.iterations;
      ++local;
      if (opts.record_history) res.history.push_back(phibar * rnorm / (beta1 * bnorm));
      if (phibar <= inner_target || beta == 0.0) break;
    }
    rnorm = true_residual(a, b, x, r);
    if (++restarts > 50) break;
  }
  res.relative_residual = rnorm / bnorm;
  if (rnorm > target)
    throw SolverError("MINRES did not converge in " + std::to_string(res.iterations) +
                          " iterations (relative residual " + std::to_string(res.relative_residual) + ")",
                      res.iterations, res.relative_residual);
  return res;
}

}  // namespace ads
