#include "fsi2d/fluid.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <algorithm>
#include <array>
#include <cmath>

namespace fsi2d {

namespace {

using AD12 = Eigen::AutoDiffScalar<Eigen::Matrix<double, 12, 1>>;

struct KernelData {
  RectQ1 basis;
  const QuadratureRule* rule = nullptr;
  std::vector<Vec2> force;           // body force per point
  std::array<double, 8> u_hist{};    // node-interleaved
  std::array<double, 8> a_hist{};
  double tau_m = 0.0, tau_c = 0.0;
  double sigma = 0.0;
  double theta_ratio = 0.0;  // (1-theta)/theta
  double rho = 1.0, mu = 1.0;
  bool convection = true;
  bool steady = false;
  bool rbvm = true;
};

// Local unknowns ordered 3*a + c with c = 0, 1 velocity and c = 2 pressure.
template <class S>
void fluid_kernel(const KernelData& kd, const std::array<S, 12>& x, std::array<S, 12>& r) {
  for (auto& v : r) v = S(0.0);
  const auto mixed = kd.basis.mixed();
  for (std::size_t q = 0; q < kd.rule->size(); ++q) {
    const Vec2& xq = kd.rule->points[q];
    const double w = kd.rule->weights[q];
    const auto N = kd.basis.values(xq);
    const auto G = kd.basis.gradients(xq);

    S u[2] = {S(0.0), S(0.0)}, p(0.0), gp[2] = {S(0.0), S(0.0)}, uxy[2] = {S(0.0), S(0.0)};
    S gu[2][2] = {{S(0.0), S(0.0)}, {S(0.0), S(0.0)}};
    double ut[2] = {0, 0}, at[2] = {0, 0};
    for (int a = 0; a < 4; ++a) {
      for (int c = 0; c < 2; ++c) {
        u[c] += N[a] * x[3 * a + c];
        for (int j = 0; j < 2; ++j) gu[c][j] += G[a][j] * x[3 * a + c];
        uxy[c] += mixed[a] * x[3 * a + c];
        ut[c] += N[a] * kd.u_hist[2 * a + c];
        at[c] += N[a] * kd.a_hist[2 * a + c];
      }
      p += N[a] * x[3 * a + 2];
      for (int j = 0; j < 2; ++j) gp[j] += G[a][j] * x[3 * a + 2];
    }
    S cv[2] = {S(0.0), S(0.0)};
    if (kd.convection) {
      cv[0] = u[0];
      cv[1] = u[1];
    }
    S conv[2], acc[2], Rs[2];
    // div(2 mu eps(u)) for bilinear fields reduces to mu grad(div u).
    const S visc[2] = {kd.mu * uxy[1], kd.mu * uxy[0]};
    for (int i = 0; i < 2; ++i) {
      conv[i] = cv[0] * gu[i][0] + cv[1] * gu[i][1];
      acc[i] = kd.steady ? S(0.0) : S(kd.sigma * (u[i] - ut[i]) - kd.theta_ratio * at[i]);
      Rs[i] = kd.rho * acc[i] + kd.rho * conv[i] + gp[i] - visc[i] - kd.rho * kd.force[q][i];
    }
    const S div = gu[0][0] + gu[1][1];
    for (int a = 0; a < 4; ++a) {
      const S cgradN = cv[0] * G[a][0] + cv[1] * G[a][1];
      for (int i = 0; i < 2; ++i) {
        S val = kd.rho * (acc[i] + conv[i] - kd.force[q][i]) * N[a] - p * G[a][i];
        for (int j = 0; j < 2; ++j) val += kd.mu * (gu[i][j] + gu[j][i]) * G[a][j];
        if (kd.rbvm) val += kd.tau_m * kd.rho * cgradN * Rs[i] + kd.tau_c * div * G[a][i];
        r[3 * a + i] += w * val;
      }
      S valp = N[a] * div;
      if (kd.rbvm) valp += kd.tau_m * (G[a][0] * Rs[0] + G[a][1] * Rs[1]);
      r[3 * a + 2] += w * valp;
    }
  }
}

Vec2 nodal_velocity(const Eigen::VectorXd& U, int compact) { return {U[2 * compact], U[2 * compact + 1]}; }

double element_cmax(const CutConfiguration& cfg, int e, const Eigen::VectorXd& scaling) {
  double cmax = 0.0;
  for (int n : cfg.mesh.element_nodes(e)) {
    const int k = cfg.dofs.index[n];
    if (k >= 0) cmax = std::max(cmax, nodal_velocity(scaling, k).norm());
  }
  return cmax;
}

}  // namespace

void FluidParams::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("fluid density must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("fluid viscosity must be positive");
}

void StabParams::validate() const {
  for (double v : {C_I, gamma_c, gamma_u, gamma_p, c_u, c_sigma})
    if (!(v > 0.0)) throw std::invalid_argument("stabilization constants must be positive");
}

void OstScheme::validate() const {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
  if (!steady && !(dt > 0.0)) throw std::invalid_argument("time step must be positive");
}

FluidVectors FluidVectors::zeros(int n_active) {
  return {Eigen::VectorXd::Zero(2 * n_active), Eigen::VectorXd::Zero(n_active), Eigen::VectorXd::Zero(2 * n_active)};
}

Tau tau_mc(double h1, double h2, const Vec2& c, const FluidParams& fp, const StabParams& sp, const OstScheme& ost) {
  const Vec2 g(4.0 / (h1 * h1), 4.0 / (h2 * h2));  // diagonal metric tensor
  const double rho = fp.rho, mu = fp.mu;
  double s = rho * rho * (c.x() * g.x() * c.x() + c.y() * g.y() * c.y()) + sp.C_I * mu * mu * (g.x() * g.x() + g.y() * g.y());
  if (!ost.steady) s += (2.0 * rho / ost.dt) * (2.0 * rho / ost.dt);
  Tau t;
  t.m = 1.0 / std::sqrt(s);
  t.c = 1.0 / (t.m * (g.x() + g.y()));
  return t;
}

double element_phi(const CutConfiguration& cfg, int e, const Eigen::VectorXd& scaling, const FluidParams& fp,
                   const StabParams& sp, double sigma) {
  const double h = cfg.mesh.diameter();
  const double cmax = fp.convection ? element_cmax(cfg, e, scaling) : 0.0;
  return fp.nu() + sp.c_u * cmax * h + sp.c_sigma * sigma * h * h;
}

void assemble_fluid(const FluidAssemblyInput& in, const FluidParams& fp, const StabParams& sp, const OstScheme& ost,
                    const FieldIndexing& idx, SystemBuilder& out) {
  const auto& cfg = *in.cfg;
  const auto& mesh = cfg.mesh;
  KernelData kd;
  kd.sigma = ost.sigma();
  kd.theta_ratio = ost.steady ? 0.0 : (1.0 - ost.theta) / ost.theta;
  kd.rho = fp.rho;
  kd.mu = fp.mu;
  kd.convection = fp.convection;
  kd.steady = ost.steady;
  kd.rbvm = sp.rbvm;
  std::vector<int> dofs(12);
  Eigen::Matrix<double, 12, 1> rl;
  Eigen::Matrix<double, 12, 12> Jl;

  for (int e = 0; e < mesh.num_elements(); ++e) {
    if (!cfg.active[e] || cfg.element_class[e] == ElementClass::Outside) continue;
    const QuadratureRule rule = element_volume_rule(cfg, e);
    if (rule.size() == 0) continue;
    kd.rule = &rule;
    kd.basis = RectQ1{mesh.element_lower_left(e), mesh.h1(), mesh.h2()};
    kd.force.assign(rule.size(), Vec2::Zero());
    if (fp.body_force)
      for (std::size_t q = 0; q < rule.size(); ++q) kd.force[q] = fp.body_force(rule.points[q], in.time);

    const auto nodes = mesh.element_nodes(e);
    std::array<AD12, 12> x, r;
    Vec2 c_center = Vec2::Zero();
    for (int a = 0; a < 4; ++a) {
      const int k = cfg.dofs.index[nodes[a]];
      if (k < 0) throw std::logic_error("active element with inactive node");
      for (int c = 0; c < 2; ++c) {
        x[3 * a + c] = AD12(in.state->U[2 * k + c], 12, 3 * a + c);
        kd.u_hist[2 * a + c] = in.history->U[2 * k + c];
        kd.a_hist[2 * a + c] = in.history->A[2 * k + c];
        dofs[3 * a + c] = idx.u(k, c);
      }
      x[3 * a + 2] = AD12(in.state->P[k], 12, 3 * a + 2);
      dofs[3 * a + 2] = idx.p(k);
      c_center += 0.25 * nodal_velocity(*in.scaling, k);
    }
    const Tau tau = tau_mc(mesh.h1(), mesh.h2(), fp.convection ? c_center : Vec2::Zero(), fp, sp, ost);
    kd.tau_m = tau.m;
    kd.tau_c = tau.c;
    fluid_kernel(kd, x, r);
    for (int i = 0; i < 12; ++i) {
      rl[i] = r[i].value();
      Jl.row(i) = r[i].derivatives().transpose();
    }
    out.add_local(dofs, rl, Jl);
  }
}

void assemble_ghost_penalty(const FluidAssemblyInput& in, const FluidParams& fp, const StabParams& sp,
                            const OstScheme& ost, const FieldIndexing& idx, SystemBuilder& out) {
  if (!sp.ghost_penalty) return;
  const auto& cfg = *in.cfg;
  const auto& mesh = cfg.mesh;
  const double sigma = ost.sigma();
  const double hT = mesh.diameter();
  std::vector<double> gx, gw;
  gauss_legendre_01(2, gx, gw);

  for (int fid : cfg.ghost_facets) {
    const Facet& f = mesh.interior_facets()[fid];
    const int els[2] = {f.e0, f.e1};
    const double hF = f.length;
    double phi_T[2], cmax = 0.0;
    for (int s = 0; s < 2; ++s) {
      phi_T[s] = element_phi(cfg, els[s], *in.scaling, fp, sp, sigma);
      if (fp.convection) cmax = std::max(cmax, element_cmax(cfg, els[s], *in.scaling));
    }
    const double phi_u = 0.5 * (phi_T[0] + phi_T[1]);
    const double phi_cp = 0.5 * (hT * hT / phi_T[0] + hT * hT / phi_T[1]);
    const double k_c = sp.gamma_c * fp.rho * (fp.nu() + phi_cp * cmax * cmax + sigma * hF * hF) * hF;
    const double k_u = sp.gamma_u * phi_u * fp.rho * hF;
    const double k_p = sp.gamma_p * phi_cp / fp.rho * hF;

    // Eight node slots: four of e0 (sign +), four of e1 (sign -).
    std::array<int, 8> compact;
    std::array<RectQ1, 2> basis;
    for (int s = 0; s < 2; ++s) {
      basis[s] = RectQ1{mesh.element_lower_left(els[s]), mesh.h1(), mesh.h2()};
      const auto nodes = mesh.element_nodes(els[s]);
      for (int a = 0; a < 4; ++a) compact[4 * s + a] = cfg.dofs.index[nodes[a]];
    }
    Eigen::Matrix<double, 24, 24> K = Eigen::Matrix<double, 24, 24>::Zero();
    for (std::size_t q = 0; q < gx.size(); ++q) {
      const Vec2 xq = f.a + gx[q] * (f.b - f.a);
      const double w = gw[q] * hF;
      std::array<double, 8> jdn;
      std::array<Vec2, 8> jgrad;
      for (int s = 0; s < 2; ++s) {
        const auto G = basis[s].gradients(xq);
        const double sign = s == 0 ? 1.0 : -1.0;
        for (int a = 0; a < 4; ++a) {
          jgrad[4 * s + a] = sign * G[a];
          jdn[4 * s + a] = sign * G[a].dot(f.normal);
        }
      }
      for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
          const double vv = w * k_c * jdn[a] * jdn[b];
          K(3 * a, 3 * b) += vv;
          K(3 * a + 1, 3 * b + 1) += vv;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) K(3 * a + i, 3 * b + j) += w * k_u * jgrad[a][i] * jgrad[b][j];
          K(3 * a + 2, 3 * b + 2) += w * k_p * jdn[a] * jdn[b];
        }
    }
    Eigen::Matrix<double, 24, 1> xl;
    std::vector<int> dofs(24);
    for (int a = 0; a < 8; ++a) {
      const int k = compact[a];
      for (int c = 0; c < 2; ++c) {
        xl[3 * a + c] = in.state->U[2 * k + c];
        dofs[3 * a + c] = idx.u(k, c);
      }
      xl[3 * a + 2] = in.state->P[k];
      dofs[3 * a + 2] = idx.p(k);
    }
    const Eigen::Matrix<double, 24, 1> rl = K * xl;
    out.add_local(dofs, rl, K);
  }
}

Eigen::VectorXd fluid_acceleration_update(const Eigen::VectorXd& U, const Eigen::VectorXd& U_prev,
                                          const Eigen::VectorXd& A_prev, double theta, double dt) {
  if (!(theta > 0.0) || !(dt > 0.0)) throw std::invalid_argument("fluid_acceleration_update: theta and dt must be positive");
  return (U - U_prev) / (theta * dt) - ((1.0 - theta) / theta) * A_prev;
}

FluidPointValue evaluate_fluid(const CutConfiguration& cfg, const FluidVectors& v, int e, const Vec2& x) {
  const auto& mesh = cfg.mesh;
  const RectQ1 basis{mesh.element_lower_left(e), mesh.h1(), mesh.h2()};
  const auto N = basis.values(x);
  const auto G = basis.gradients(x);
  FluidPointValue out;
  const auto nodes = mesh.element_nodes(e);
  for (int a = 0; a < 4; ++a) {
    const int k = cfg.dofs.index[nodes[a]];
    if (k < 0) throw std::logic_error("evaluate_fluid: inactive node");
    const Vec2 ua = nodal_velocity(v.U, k);
    out.u += N[a] * ua;
    out.grad_u += ua * G[a].transpose();
    out.p += N[a] * v.P[k];
    out.grad_p += v.P[k] * G[a];
  }
  return out;
}

}  // namespace fsi2d
