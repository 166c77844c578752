#include "fsi2d/solid.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace fsi2d {

namespace {

constexpr double kCorner[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};

struct ElementKinematics {
  std::array<double, 4> N;
  std::array<Vec2, 4> dN;  // reference-configuration gradients
  double detJ;
};

ElementKinematics q1_reference(const SolidMesh& mesh, int e, const Vec2& xi) {
  ElementKinematics k;
  std::array<Vec2, 4> dxi;
  for (int a = 0; a < 4; ++a) {
    const double s = kCorner[a][0], t = kCorner[a][1];
    k.N[a] = 0.25 * (1 + s * xi.x()) * (1 + t * xi.y());
    dxi[a] = Vec2(0.25 * s * (1 + t * xi.y()), 0.25 * t * (1 + s * xi.x()));
  }
  Mat2 J = Mat2::Zero();
  for (int a = 0; a < 4; ++a) J += mesh.X[mesh.elements[e][a]] * dxi[a].transpose();
  k.detJ = J.determinant();
  const Mat2 Jinv_t = J.inverse().transpose();
  for (int a = 0; a < 4; ++a) k.dN[a] = Jinv_t * dxi[a];
  return k;
}

const std::array<Vec2, 4>& gauss2x2() {
  static const double g = 1.0 / std::sqrt(3.0);
  static const std::array<Vec2, 4> pts{Vec2(-g, -g), Vec2(g, -g), Vec2(g, g), Vec2(-g, g)};
  return pts;
}

Mat2 grad_u(const SolidMesh& mesh, int e, const Eigen::VectorXd& D, const ElementKinematics& k) {
  Mat2 H = Mat2::Zero();
  for (int a = 0; a < 4; ++a) {
    const int n = mesh.elements[e][a];
    H += Vec2(D[2 * n], D[2 * n + 1]) * k.dN[a].transpose();
  }
  return H;
}

}  // namespace

void NeoHookean::validate() const {
  if (!(E > 0.0)) throw std::invalid_argument("Young's modulus must be positive");
  if (!(nu > -1.0 && nu < 0.5)) throw std::invalid_argument("Poisson ratio must lie in (-1, 0.5)");
  if (!(rho > 0.0)) throw std::invalid_argument("solid density must be positive");
}

double strain_energy(const Mat2& F, const NeoHookean& m) {
  const double J = F.determinant();
  if (J <= 0.0) throw ElementInversion("non-positive det F");
  const Mat2 C = F.transpose() * F;
  const double lnJ = std::log(J);
  // Plane strain: the out-of-plane stretch is one.
  return 0.5 * m.mu() * (C.trace() + 1.0 - 3.0) - m.mu() * lnJ + 0.5 * m.lambda() * lnJ * lnJ;
}

Mat2 pk2_stress(const Mat2& F, const NeoHookean& m) {
  const double J = F.determinant();
  if (J <= 0.0) throw ElementInversion("non-positive det F");
  const Mat2 Cinv = (F.transpose() * F).inverse();
  return m.mu() * (Mat2::Identity() - Cinv) + m.lambda() * std::log(J) * Cinv;
}

Eigen::Matrix4d material_tangent(const Mat2& F, const NeoHookean& m) {
  const double J = F.determinant();
  if (J <= 0.0) throw ElementInversion("non-positive det F");
  const Mat2 Ci = (F.transpose() * F).inverse();
  const double lam = m.lambda();
  const double c = m.mu() - lam * std::log(J);
  Eigen::Matrix4d T;
  for (int I = 0; I < 2; ++I)
    for (int Jx = 0; Jx < 2; ++Jx)
      for (int K = 0; K < 2; ++K)
        for (int L = 0; L < 2; ++L)
          T(2 * I + Jx, 2 * K + L) =
              lam * Ci(I, Jx) * Ci(K, L) + c * (Ci(I, K) * Ci(Jx, L) + Ci(I, L) * Ci(Jx, K));
  return T;
}

Mat2 deformation_gradient(const SolidMesh& mesh, int e, const Eigen::VectorXd& D, const Vec2& xi) {
  const auto k = q1_reference(mesh, e, xi);
  return Mat2::Identity() + grad_u(mesh, e, D, k);
}

SolidOperator::SolidOperator(const SolidMesh& mesh, const NeoHookean& mat) : mesh_(&mesh), mat_(mat) {
  mat_.validate();
  const int n = mesh.num_dofs();
  std::vector<Triplet> trip;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (const auto& xi : gauss2x2()) {
      const auto k = q1_reference(mesh, e, xi);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          const double v = mat_.rho * k.N[a] * k.N[b] * k.detJ;
          const int na = mesh.elements[e][a], nb = mesh.elements[e][b];
          trip.emplace_back(2 * na, 2 * nb, v);
          trip.emplace_back(2 * na + 1, 2 * nb + 1, v);
        }
    }
  }
  mass_.resize(n, n);
  mass_.setFromTriplets(trip.begin(), trip.end());
}

Eigen::VectorXd SolidOperator::internal_force(const Eigen::VectorXd& D, SparseMatrix* tangent) const {
  const auto& mesh = *mesh_;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(mesh.num_dofs());
  std::vector<Triplet> trip;
  if (tangent) trip.reserve(static_cast<std::size_t>(mesh.num_elements()) * 64 * 4);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& en = mesh.elements[e];
    for (const auto& xi : gauss2x2()) {
      const auto k = q1_reference(mesh, e, xi);
      const Mat2 F = Mat2::Identity() + grad_u(mesh, e, D, k);
      if (F.determinant() <= 0.0) throw ElementInversion("solid element " + std::to_string(e) + " inverted");
      const Mat2 S = pk2_stress(F, mat_);
      const Mat2 P = F * S;
      const double w = k.detJ;
      for (int a = 0; a < 4; ++a) {
        const Vec2 fa = P * k.dN[a] * w;
        f[2 * en[a]] += fa.x();
        f[2 * en[a] + 1] += fa.y();
      }
      if (!tangent) continue;
      const Eigen::Matrix4d T = material_tangent(F, mat_);
      for (int a = 0; a < 4; ++a) {
        // B_a(i, KL) = F_iK dN_a/dX_L, symmetrized through the minor symmetry of T.
        Eigen::Matrix<double, 2, 4> Ba;
        for (int i = 0; i < 2; ++i)
          for (int K = 0; K < 2; ++K)
            for (int L = 0; L < 2; ++L) Ba(i, 2 * K + L) = F(i, K) * k.dN[a][L];
        const Eigen::Matrix<double, 2, 4> BaT = Ba * T;
        for (int b = 0; b < 4; ++b) {
          Eigen::Matrix<double, 2, 4> Bb;
          for (int i = 0; i < 2; ++i)
            for (int K = 0; K < 2; ++K)
              for (int L = 0; L < 2; ++L) Bb(i, 2 * K + L) = F(i, K) * k.dN[b][L];
          Mat2 Kab = BaT * Bb.transpose();
          const double geo = k.dN[a].dot(S * k.dN[b]);
          Kab(0, 0) += geo;
          Kab(1, 1) += geo;
          Kab *= w;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) trip.emplace_back(2 * en[a] + i, 2 * en[b] + j, Kab(i, j));
        }
      }
    }
  }
  if (tangent) {
    tangent->resize(mesh.num_dofs(), mesh.num_dofs());
    tangent->setFromTriplets(trip.begin(), trip.end());
  }
  return f;
}

double SolidOperator::stored_energy(const Eigen::VectorXd& D) const {
  double W = 0.0;
  for (int e = 0; e < mesh_->num_elements(); ++e)
    for (const auto& xi : gauss2x2()) {
      const auto k = q1_reference(*mesh_, e, xi);
      W += strain_energy(Mat2::Identity() + grad_u(*mesh_, e, D, k), mat_) * k.detJ;
    }
  return W;
}

Eigen::VectorXd SolidOperator::body_force(const Vec2& b) const {
  Eigen::VectorXd ones(num_dofs());
  for (int n = 0; n < mesh_->num_nodes(); ++n) {
    ones[2 * n] = b.x();
    ones[2 * n + 1] = b.y();
  }
  return mass_ * ones;
}

double SolidOperator::min_jacobian(const Eigen::VectorXd& D) const {
  double jmin = std::numeric_limits<double>::infinity();
  for (int e = 0; e < mesh_->num_elements(); ++e)
    for (const auto& xi : gauss2x2()) {
      const auto k = q1_reference(*mesh_, e, xi);
      jmin = std::min(jmin, (Mat2::Identity() + grad_u(*mesh_, e, D, k)).determinant());
    }
  return jmin;
}

GenAlphaParams GenAlphaParams::from_rho_inf(double rho_inf) {
  if (!(rho_inf >= 0.0 && rho_inf <= 1.0)) throw std::invalid_argument("rho_inf must lie in [0, 1]");
  GenAlphaParams p;
  p.rho_inf = rho_inf;
  p.alpha_f = rho_inf / (rho_inf + 1.0);
  p.alpha_m = (2.0 * rho_inf - 1.0) / (rho_inf + 1.0);
  p.gamma = 0.5 - p.alpha_m + p.alpha_f;
  p.beta = 0.25 * (1.0 - p.alpha_m + p.alpha_f) * (1.0 - p.alpha_m + p.alpha_f);
  return p;
}

double genalpha_mass_coefficient(double dt, const GenAlphaParams& p) {
  return (1.0 - p.alpha_m) / (p.beta * dt * dt);
}

Eigen::VectorXd genalpha_residual(const SparseMatrix& M, const Eigen::VectorXd& Dn, const Eigen::VectorXd& fint_n,
                                  const Eigen::VectorXd& fext_n, const SolidState& prev,
                                  const Eigen::VectorXd& fint_prev, const Eigen::VectorXd& fext_prev, double dt,
                                  const GenAlphaParams& p) {
  const double c = genalpha_mass_coefficient(dt, p);
  const Eigen::VectorXd pred = prev.D + dt * prev.U + (0.5 - p.beta) * dt * dt * prev.A;
  const Eigen::VectorXd H = c * (M * pred) - p.alpha_m * (M * prev.A) - p.alpha_f * (fint_prev - fext_prev);
  return c * (M * Dn) + (1.0 - p.alpha_f) * (fint_n - fext_n) - H;
}

SolidState genalpha_update(const Eigen::VectorXd& Dn, const SolidState& prev, double dt, const GenAlphaParams& p) {
  SolidState s;
  s.D = Dn;
  const Eigen::VectorXd pred = prev.D + dt * prev.U + (0.5 - p.beta) * dt * dt * prev.A;
  s.A = (Dn - pred) / (p.beta * dt * dt);
  s.U = prev.U + (1.0 - p.gamma) * dt * prev.A + p.gamma * dt * s.A;
  return s;
}

}  // namespace fsi2d
