#include "fsi2d/sparse.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include <fstream>
#include <limits>
#include <memory>
#include <iomanip>

namespace fsi2d {

SparseMatrix SystemBuilder::matrix() const {
  SparseMatrix A(size(), size());
  A.setFromTriplets(triplets_.begin(), triplets_.end());
  A.makeCompressed();
  return A;
}

void apply_dirichlet(SparseMatrix& A, Eigen::VectorXd& r, const std::vector<int>& dofs,
                     const std::vector<double>& x_minus_g) {
  if (dofs.size() != x_minus_g.size()) throw std::invalid_argument("apply_dirichlet: size mismatch");
  std::vector<char> fixed(A.rows(), 0);
  for (int d : dofs) fixed[d] = 1;
  for (int row = 0; row < A.outerSize(); ++row) {
    if (!fixed[row]) continue;
    for (SparseMatrix::InnerIterator it(A, row); it; ++it) it.valueRef() = (it.col() == row) ? 1.0 : 0.0;
  }
  // Rows without a stored diagonal need one inserted.
  std::vector<Triplet> missing;
  for (int d : dofs)
    if (A.coeff(d, d) != 1.0) missing.emplace_back(d, d, 1.0);
  if (!missing.empty()) {
    SparseMatrix D(A.rows(), A.cols());
    D.setFromTriplets(missing.begin(), missing.end());
    A += D;
  }
  A.prune(0.0);
  for (std::size_t k = 0; k < dofs.size(); ++k) r[dofs[k]] = x_minus_g[k];
}

Eigen::VectorXd factor_solve(const SparseMatrix& A, const Eigen::VectorXd& b) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw std::invalid_argument("factor_solve: dimension mismatch");
  Eigen::SparseMatrix<double, Eigen::ColMajor> Ac(A);
  Ac.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(Ac);
  lu.factorize(Ac);
  if (lu.info() != Eigen::Success) {
    // SparseLU reports the failing column in its message ("... in column k").
    const std::string msg = lu.lastErrorMessage();
    int pivot = -1;
    const auto pos = msg.find_last_of(' ');
    if (pos != std::string::npos) {
      try {
        pivot = std::stoi(msg.substr(pos + 1));
      } catch (...) {
      }
    }
    throw SingularMatrix("sparse LU failed: " + msg, pivot);
  }
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw SingularMatrix("sparse LU solve failed", -1);
  return x;
}

BlockMatrix::BlockMatrix(std::vector<int> row_sizes, std::vector<int> col_sizes)
    : rows_(std::move(row_sizes)), cols_(std::move(col_sizes)) {
  blocks_.resize(rows_.size() * cols_.size());
  for (int i = 0; i < block_rows(); ++i)
    for (int j = 0; j < block_cols(); ++j) blocks_[i * block_cols() + j].resize(rows_[i], cols_[j]);
}

void BlockMatrix::set(int bi, int bj, SparseMatrix block) {
  if (block.rows() != rows_[bi] || block.cols() != cols_[bj]) throw std::invalid_argument("BlockMatrix::set: block size mismatch");
  blocks_[bi * block_cols() + bj] = std::move(block);
}

SparseMatrix BlockMatrix::flatten() const {
  int nr = 0, nc = 0;
  for (int s : rows_) nr += s;
  for (int s : cols_) nc += s;
  std::vector<Triplet> trip;
  int r0 = 0;
  for (int i = 0; i < block_rows(); ++i) {
    int c0 = 0;
    for (int j = 0; j < block_cols(); ++j) {
      const auto& B = block(i, j);
      for (int k = 0; k < B.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(B, k); it; ++it) trip.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
      c0 += cols_[j];
    }
    r0 += rows_[i];
  }
  SparseMatrix A(nr, nc);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

BlockMatrix BlockMatrix::split(const SparseMatrix& A, const std::vector<int>& sizes) {
  BlockMatrix L(sizes, sizes);
  std::vector<int> start{0};
  for (int s : sizes) start.push_back(start.back() + s);
  if (start.back() != A.rows() || A.rows() != A.cols()) throw std::invalid_argument("BlockMatrix::split: partition mismatch");
  for (int i = 0; i < L.block_rows(); ++i)
    for (int j = 0; j < L.block_cols(); ++j) L.set(i, j, A.block(start[i], start[j], sizes[i], sizes[j]));
  return L;
}

BlockGaussSeidelResult block_gauss_seidel(const BlockMatrix& L, const Eigen::VectorXd& b, int max_sweeps,
                                          double rel_tol) {
  const int nb = L.block_rows();
  std::vector<int> start{0};
  for (int s : L.row_sizes()) start.push_back(start.back() + s);
  if (b.size() != start.back()) throw std::invalid_argument("block_gauss_seidel: rhs size mismatch");

  using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
  std::vector<std::unique_ptr<Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>>>> lus;
  for (int i = 0; i < nb; ++i) {
    ColMatrix D(L.block(i, i));
    D.makeCompressed();
    auto lu = std::make_unique<Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>>>();
    lu->compute(D);
    if (lu->info() != Eigen::Success) throw SingularMatrix("diagonal block " + std::to_string(i) + " is singular", i);
    lus.push_back(std::move(lu));
  }
  const SparseMatrix A = L.flatten();
  BlockGaussSeidelResult res;
  res.x = Eigen::VectorXd::Zero(b.size());
  const double bnorm = std::max(b.norm(), 1e-300);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int i = 0; i < nb; ++i) {
      Eigen::VectorXd rhs = b.segment(start[i], L.row_sizes()[i]);
      for (int j = 0; j < nb; ++j)
        if (j != i) rhs -= L.block(i, j) * res.x.segment(start[j], L.col_sizes()[j]);
      res.x.segment(start[i], L.row_sizes()[i]) = lus[i]->solve(rhs);
    }
    ++res.sweeps;
    const double r = (b - A * res.x).norm();
    res.residual_history.push_back(r);
    if (r <= rel_tol * bnorm) {
      res.converged = true;
      break;
    }
  }
  return res;
}

void write_matrix_market(const std::string& path, const SparseMatrix& A) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix market file '" + path + "'");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n' << std::setprecision(17);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

double condition_number(const Eigen::MatrixXd& A) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0.0;
  const double smin = s[s.size() - 1];
  return smin > 0.0 ? s[0] / smin : std::numeric_limits<double>::infinity();
}

}  // namespace fsi2d
