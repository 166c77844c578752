#include "fsi2d/projection.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <array>
#include <queue>
#include <string>

namespace fsi2d {

namespace {

bool support_has_fluid(const CutConfiguration& cfg, int node) {
  for (int e : cfg.mesh.node_elements(node))
    if (cfg.active[e] && cfg.fluid_area[e] > 0.0) return true;
  return false;
}

// Scalar h_F^3 <[[d_n u]], [[d_n v]]> over the ghost facets, on all current DOFs.
SparseMatrix normal_jump_matrix(const CutConfiguration& cfg) {
  const auto& mesh = cfg.mesh;
  const int n = cfg.dofs.size();
  std::vector<double> gx, gw;
  gauss_legendre_01(2, gx, gw);
  std::vector<Triplet> trip;
  for (int fid : cfg.ghost_facets) {
    const Facet& f = mesh.interior_facets()[fid];
    const int els[2] = {f.e0, f.e1};
    const double hF = f.length;
    std::array<int, 8> k;
    std::array<RectQ1, 2> basis;
    for (int s = 0; s < 2; ++s) {
      basis[s] = RectQ1{mesh.element_lower_left(els[s]), mesh.h1(), mesh.h2()};
      const auto nodes = mesh.element_nodes(els[s]);
      for (int a = 0; a < 4; ++a) k[4 * s + a] = cfg.dofs.index[nodes[a]];
    }
    Eigen::Matrix<double, 8, 8> K = Eigen::Matrix<double, 8, 8>::Zero();
    for (std::size_t q = 0; q < gx.size(); ++q) {
      const Vec2 xq = f.a + gx[q] * (f.b - f.a);
      Eigen::Matrix<double, 8, 1> j;
      for (int s = 0; s < 2; ++s) {
        const auto G = basis[s].gradients(xq);
        for (int a = 0; a < 4; ++a) j[4 * s + a] = (s == 0 ? 1.0 : -1.0) * G[a].dot(f.normal);
      }
      K += gw[q] * hF * hF * hF * hF * (j * j.transpose());
    }
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        if (K(a, b) != 0.0) trip.emplace_back(k[a], k[b], K(a, b));
  }
  SparseMatrix A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

std::vector<int> free_numbering(const DofCorrespondence& corr, int& nfree) {
  std::vector<int> fidx(corr.status.size(), -1);
  nfree = 0;
  for (std::size_t k = 0; k < corr.status.size(); ++k)
    if (corr.status[k] == DofStatus::NeedsExtension) fidx[k] = nfree++;
  return fidx;
}

void check_connected(const SparseMatrix& K, const DofCorrespondence& corr) {
  const int n = static_cast<int>(K.rows());
  std::vector<char> reached(n, 0);
  std::queue<int> open;
  for (int k = 0; k < n; ++k)
    if (corr.status[k] == DofStatus::Copied) reached[k] = 1, open.push(k);
  while (!open.empty()) {
    const int k = open.front();
    open.pop();
    for (SparseMatrix::InnerIterator it(K, k); it; ++it)
      if (!reached[it.col()]) reached[it.col()] = 1, open.push(static_cast<int>(it.col()));
  }
  for (int k = 0; k < n; ++k)
    if (!reached[k]) throw IsolatedGhost("extension DOF " + std::to_string(k) + " has no facet path to a copied DOF");
}

}  // namespace

int DofCorrespondence::count(DofStatus s) const { return static_cast<int>(std::count(status.begin(), status.end(), s)); }

bool DofCorrespondence::identity() const {
  for (std::size_t k = 0; k < status.size(); ++k)
    if (status[k] != DofStatus::Copied || source[k] != static_cast<int>(k)) return false;
  return true;
}

DofCorrespondence match_dofs(const CutConfiguration& prev, const CutConfiguration& curr) {
  if (prev.mesh.num_nodes() != curr.mesh.num_nodes()) throw std::invalid_argument("projection needs one background mesh");
  DofCorrespondence c;
  const int n = curr.dofs.size();
  c.status.assign(n, DofStatus::NeedsExtension);
  c.source.assign(n, -1);
  for (int k = 0; k < n; ++k) {
    const int node = curr.dofs.nodes[k];
    const int kp = prev.dofs.index[node];
    if (kp < 0) {
      if (curr.dofs.role[node] == DofRole::Standard) c.status[k] = DofStatus::Violation;
      continue;
    }
    if (support_has_fluid(prev, node) && support_has_fluid(curr, node)) {
      c.status[k] = DofStatus::Copied;
      c.source[k] = kp;
    }
  }
  return c;
}

PartialValues transfer_copy(const CutConfiguration& prev, const CutConfiguration& curr,
                            const Eigen::VectorXd& values_prev, int ncomp) {
  if (values_prev.size() != ncomp * prev.dofs.size()) throw std::invalid_argument("transfer_copy: size mismatch");
  PartialValues out;
  out.corr = match_dofs(prev, curr);
  for (std::size_t k = 0; k < out.corr.status.size(); ++k)
    if (out.corr.status[k] == DofStatus::Violation) {
      const int node = curr.dofs.nodes[k];
      throw CflViolation("the CFL-like condition is not satisfied! (node " + std::to_string(node) + ")", node);
    }
  if (out.corr.identity()) {
    out.values = values_prev;
    return out;
  }
  out.values = Eigen::VectorXd::Zero(ncomp * curr.dofs.size());
  for (std::size_t k = 0; k < out.corr.status.size(); ++k)
    if (out.corr.source[k] >= 0) out.values.segment(ncomp * k, ncomp) = values_prev.segment(ncomp * out.corr.source[k], ncomp);
  return out;
}

Eigen::MatrixXd extension_matrix(const CutConfiguration& curr, const DofCorrespondence& corr) {
  const SparseMatrix K = normal_jump_matrix(curr);
  int nfree = 0;
  const auto fidx = free_numbering(corr, nfree);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nfree, nfree);
  for (int r = 0; r < K.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(K, r); it; ++it)
      if (fidx[r] >= 0 && fidx[it.col()] >= 0) A(fidx[r], fidx[it.col()]) += it.value();
  return A;
}

Eigen::VectorXd extension_solve(const CutConfiguration& curr, const Eigen::VectorXd& values_partial,
                                const DofCorrespondence& corr, int ncomp) {
  int nfree = 0;
  const auto fidx = free_numbering(corr, nfree);
  if (nfree == 0) return values_partial;
  const SparseMatrix K = normal_jump_matrix(curr);
  check_connected(K, corr);

  std::vector<Triplet> trip;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nfree, ncomp);
  for (int r = 0; r < K.outerSize(); ++r) {
    if (fidx[r] < 0) continue;
    for (SparseMatrix::InnerIterator it(K, r); it; ++it) {
      const int c = static_cast<int>(it.col());
      if (fidx[c] >= 0)
        trip.emplace_back(fidx[r], fidx[c], it.value());
      else
        for (int m = 0; m < ncomp; ++m) rhs(fidx[r], m) -= it.value() * values_partial[ncomp * c + m];
    }
  }
  Eigen::SparseMatrix<double> A(nfree, nfree);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw IsolatedGhost("extension system is singular");
  const Eigen::MatrixXd x = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success || !x.allFinite()) throw IsolatedGhost("extension system is singular");
  for (int i = 0; i < ldlt.vectorD().size(); ++i)
    if (!(ldlt.vectorD()[i] > 0.0)) throw IsolatedGhost("extension system is not positive definite");

  Eigen::VectorXd out = values_partial;
  for (std::size_t k = 0; k < fidx.size(); ++k)
    if (fidx[k] >= 0)
      for (int m = 0; m < ncomp; ++m) out[ncomp * k + m] = x(fidx[k], m);
  return out;
}

FluidVectors project_fluid(const CutConfiguration& prev, const CutConfiguration& curr, const FluidVectors& v) {
  FluidVectors out;
  auto project = [&](const Eigen::VectorXd& x, int ncomp) {
    const PartialValues pv = transfer_copy(prev, curr, x, ncomp);
    return extension_solve(curr, pv.values, pv.corr, ncomp);
  };
  out.U = project(v.U, 2);
  out.P = project(v.P, 1);
  out.A = project(v.A, 2);
  return out;
}

}  // namespace fsi2d
