#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>
#include <vector>

namespace fsi2d {

/// Compressed row storage; column indices sorted and unique after compression.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

class SingularMatrix : public std::runtime_error {
 public:
  SingularMatrix(const std::string& what, int pivot) : std::runtime_error(what), pivot_(pivot) {}
  int pivot() const { return pivot_; }

 private:
  int pivot_;
};

/// Accumulates a residual vector and Jacobian triplets; negative indices are dropped.
class SystemBuilder {
 public:
  explicit SystemBuilder(int n = 0) : residual_(Eigen::VectorXd::Zero(n)) {}

  int size() const { return static_cast<int>(residual_.size()); }
  void add_residual(int row, double v) {
    if (row >= 0) residual_[row] += v;
  }
  void add_jacobian(int row, int col, double v) {
    if (row >= 0 && col >= 0 && v != 0.0) triplets_.emplace_back(row, col, v);
  }
  template <class Vec, class Mat>
  void add_local(const std::vector<int>& dofs, const Vec& r, const Mat& J) {
    const int n = static_cast<int>(dofs.size());
    for (int a = 0; a < n; ++a) {
      if (dofs[a] < 0) continue;
      residual_[dofs[a]] += r[a];
      for (int b = 0; b < n; ++b) add_jacobian(dofs[a], dofs[b], J(a, b));
    }
  }

  Eigen::VectorXd& residual() { return residual_; }
  const Eigen::VectorXd& residual() const { return residual_; }
  SparseMatrix matrix() const;
  const std::vector<Triplet>& triplets() const { return triplets_; }

 private:
  Eigen::VectorXd residual_;
  std::vector<Triplet> triplets_;
};

/// Replaces constrained rows by identity rows with residual x - g (so the
/// Newton increment enforces the prescribed value).
void apply_dirichlet(SparseMatrix& A, Eigen::VectorXd& r, const std::vector<int>& dofs,
                     const std::vector<double>& x_minus_g);

/// Sparse LU with COLAMD ordering; throws SingularMatrix.
Eigen::VectorXd factor_solve(const SparseMatrix& A, const Eigen::VectorXd& b);

/// Grid of sparse blocks with explicit partition sizes.
class BlockMatrix {
 public:
  BlockMatrix(std::vector<int> row_sizes, std::vector<int> col_sizes);

  int block_rows() const { return static_cast<int>(rows_.size()); }
  int block_cols() const { return static_cast<int>(cols_.size()); }
  const std::vector<int>& row_sizes() const { return rows_; }
  const std::vector<int>& col_sizes() const { return cols_; }

  void set(int bi, int bj, SparseMatrix block);
  const SparseMatrix& block(int bi, int bj) const { return blocks_[bi * block_cols() + bj]; }

  SparseMatrix flatten() const;
  /// Splits a flattened matrix along the given partitions.
  static BlockMatrix split(const SparseMatrix& A, const std::vector<int>& sizes);

 private:
  std::vector<int> rows_, cols_;
  std::vector<SparseMatrix> blocks_;
};

struct BlockGaussSeidelResult {
  Eigen::VectorXd x;
  std::vector<double> residual_history;  ///< global l2 residual after each sweep
  int sweeps = 0;
  bool converged = false;
};

/// Forward block Gauss-Seidel sweeps with direct solves on the diagonal blocks.
BlockGaussSeidelResult block_gauss_seidel(const BlockMatrix& L, const Eigen::VectorXd& b, int max_sweeps,
                                          double rel_tol);

void write_matrix_market(const std::string& path, const SparseMatrix& A);

/// 2-norm condition number via dense SVD (small systems only).
double condition_number(const Eigen::MatrixXd& A);

}  // namespace fsi2d
