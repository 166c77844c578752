#include "fsi2d/nitsche.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <algorithm>
#include <array>
#include <cmath>

namespace fsi2d {

namespace {

using AD16 = Eigen::AutoDiffScalar<Eigen::Matrix<double, 16, 1>>;
using AD24 = Eigen::AutoDiffScalar<Eigen::Matrix<double, 24, 1>>;

// Velocity, symmetric-gradient flux and pressure of a Q1 fluid element at one point.
template <class S>
struct FluidTrace {
  S u[2];
  S flux[2];  // (2 mu eps(u) n)_i
  S p;
};

template <class S>
FluidTrace<S> fluid_trace(const std::array<double, 4>& N, const std::array<Vec2, 4>& G, const S* x, const Vec2& n,
                          double mu) {
  FluidTrace<S> t;
  S gu[2][2];
  for (int i = 0; i < 2; ++i) {
    t.u[i] = S(0.0);
    for (int j = 0; j < 2; ++j) gu[i][j] = S(0.0);
  }
  t.p = S(0.0);
  for (int a = 0; a < 4; ++a) {
    for (int c = 0; c < 2; ++c) {
      t.u[c] += N[a] * x[3 * a + c];
      for (int j = 0; j < 2; ++j) gu[c][j] += G[a][j] * x[3 * a + c];
    }
    t.p += N[a] * x[3 * a + 2];
  }
  for (int i = 0; i < 2; ++i) {
    t.flux[i] = S(0.0);
    for (int j = 0; j < 2; ++j) t.flux[i] += mu * (gu[i][j] + gu[j][i]) * n[j];
  }
  return t;
}

template <int N, class S>
void extract(const std::array<S, N>& r, Eigen::Matrix<double, N, 1>& rl, Eigen::Matrix<double, N, N>& Jl) {
  for (int i = 0; i < N; ++i) {
    rl[i] = r[i].value();
    Jl.row(i) = r[i].derivatives().transpose();
  }
}

Vec2 nodal(const Eigen::VectorXd& U, int k) { return {U[2 * k], U[2 * k + 1]}; }

}  // namespace

void NitscheParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("Nitsche penalty must be positive");
  if (adjoint_sign != 1 && adjoint_sign != -1) throw std::invalid_argument("adjoint sign must be +1 or -1");
  if (!(trace_constant > 0.0)) throw std::invalid_argument("trace constant must be positive");
}

Eigen::VectorXd interface_velocity(const Eigen::VectorXd& D, const Eigen::VectorXd& D_prev,
                                   const Eigen::VectorXd& U_prev, double theta_gamma, double dt) {
  if (!(theta_gamma > 0.0) || !(dt > 0.0)) throw std::invalid_argument("interface_velocity: theta and dt must be positive");
  return (D - D_prev) / (theta_gamma * dt) - ((1.0 - theta_gamma) / theta_gamma) * U_prev;
}

Vec2 InterfaceKinematics::velocity(int node) const {
  if (steady) return Vec2::Zero();
  const Vec2 d = nodal(*D, node) - nodal(*D_prev, node);
  return d / (theta_gamma * dt) - ((1.0 - theta_gamma) / theta_gamma) * nodal(*U_prev, node);
}

ExcludedRegion fluid_solid_region(const Polygon& outline, const std::vector<InterfaceSegment>& iface) {
  ExcludedRegion r;
  r.polygons.push_back(outline);
  for (std::size_t k = 0; k < iface.size(); ++k)
    r.segments.push_back({iface[k].a, iface[k].b, iface[k].normal, CouplingKind::FluidSolid, static_cast<int>(k)});
  return r;
}

void assemble_fs_coupling(const FsCouplingInput& in, const FluidParams& fp, const NitscheParams& np,
                          const OstScheme& ost, const FieldIndexing& fidx, int solid_offset, int num_solid_dofs,
                          SystemBuilder* out, CouplingForces* forces) {
  const auto& cfg = *in.cfg;
  const auto& mesh = cfg.mesh;
  const double h = mesh.diameter();
  const double mu = fp.mu, rho = fp.rho, sigma = ost.sigma();
  const double dvel = in.kin.dvel_dD();
  if (forces) forces->solid_rows = Eigen::VectorXd::Zero(num_solid_dofs);
  std::vector<int> dofs(16);
  Eigen::Matrix<double, 16, 1> rl;
  Eigen::Matrix<double, 16, 16> Jl;

  for (const SurfacePiece& piece : cfg.surface) {
    const CutterSegment& seg = in.region->segments[piece.segment];
    if (seg.kind != CouplingKind::FluidSolid) continue;
    const InterfaceSegment& is = (*in.iface)[seg.source];
    const int e = piece.element;
    const RectQ1 basis{mesh.element_lower_left(e), mesh.h1(), mesh.h2()};
    const auto nodes = mesh.element_nodes(e);
    const int snodes[2] = {is.node0, is.node1};
    const Vec2 n = seg.normal;  // fluid into solid

    std::array<AD16, 16> x;
    std::array<int, 4> compact;
    for (int a = 0; a < 4; ++a) {
      const int k = cfg.dofs.index[nodes[a]];
      if (k < 0) throw std::logic_error("coupling on element with inactive node");
      compact[a] = k;
      for (int c = 0; c < 2; ++c) {
        x[3 * a + c] = AD16(in.state->U[2 * k + c], 16, 3 * a + c);
        dofs[3 * a + c] = fidx.u(k, c);
      }
      x[3 * a + 2] = AD16(in.state->P[k], 16, 3 * a + 2);
      dofs[3 * a + 2] = fidx.p(k);
    }
    Vec2 vs[2];
    for (int b = 0; b < 2; ++b) {
      vs[b] = in.kin.velocity(snodes[b]);
      for (int c = 0; c < 2; ++c) {
        const double d = in.kin.steady ? 0.0 : (*in.kin.D)[2 * snodes[b] + c];
        x[12 + 2 * b + c] = AD16(d, 16, 12 + 2 * b + c);
        dofs[12 + 2 * b + c] = solid_offset + 2 * snodes[b] + c;
      }
    }

    std::array<AD16, 16> r;
    for (auto& v : r) v = AD16(0.0);
    const Vec2 t = is.b - is.a;
    for (std::size_t q = 0; q < piece.rule.size(); ++q) {
      const Vec2& xq = piece.rule.points[q];
      const double w = piece.rule.weights[q];
      const auto N = basis.values(xq);
      const auto G = basis.gradients(xq);
      const double s = std::clamp((xq - is.a).dot(t) / t.squaredNorm(), 0.0, 1.0);
      const double Ns[2] = {1.0 - s, s};
      const auto tr = fluid_trace(N, G, x.data(), n, mu);

      Vec2 cf = Vec2::Zero();
      for (int a = 0; a < 4; ++a) cf += N[a] * nodal(*in.scaling, compact[a]);
      const double kappa = rho * sigma * h + (fp.convection ? rho * cf.norm() : 0.0) + mu / h;
      const double pen_t = np.gamma * mu / h;
      const double pen_n = np.gamma * kappa;

      AD16 jump[2];
      for (int c = 0; c < 2; ++c) {
        AD16 us(0.0);
        for (int b = 0; b < 2; ++b) {
          const AD16& d = x[12 + 2 * b + c];
          us += Ns[b] * (vs[b][c] + dvel * (d - d.value()));
        }
        jump[c] = tr.u[c] - us;
      }
      const AD16 jn = jump[0] * n[0] + jump[1] * n[1];
      // Traction-type term shared by fluid rows (test v) and solid rows (test -w).
      AD16 trac[2];
      for (int c = 0; c < 2; ++c) trac[c] = -tr.flux[c] + tr.p * n[c] + pen_t * jump[c] + pen_n * jn * n[c];
      for (int a = 0; a < 4; ++a) {
        const double gn = G[a].dot(n);
        const AD16 gj = G[a][0] * jump[0] + G[a][1] * jump[1];
        for (int c = 0; c < 2; ++c)
          r[3 * a + c] += w * (trac[c] * N[a] + np.adjoint_sign * mu * (jump[c] * gn + n[c] * gj));
        r[3 * a + 2] += w * (-jn * N[a]);
      }
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) r[12 + 2 * b + c] += w * (-trac[c] * Ns[b]);
      if (forces) forces->jump_l2_sq += w * (jump[0].value() * jump[0].value() + jump[1].value() * jump[1].value());
    }
    extract<16>(r, rl, Jl);
    if (out) out->add_local(dofs, rl, Jl);
    if (forces) {
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 2; ++c) forces->fluid_sum[c] += rl[3 * a + c];
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          forces->solid_sum[c] += rl[12 + 2 * b + c];
          forces->solid_rows[2 * snodes[b] + c] += rl[12 + 2 * b + c];
        }
    }
  }
}

void assemble_ff_coupling(const FfCouplingInput& in, const FluidParams& fp, const StabParams& sp,
                          const NitscheParams& np, const OstScheme& ost, const FieldIndexing& idx_i,
                          const FieldIndexing& idx_j, SystemBuilder* out, CouplingForces* diag) {
  const auto& ci = *in.cfg_i;
  const auto& cj = *in.cfg_j;
  const auto& mi = ci.mesh;
  const auto& mj = cj.mesh;
  const double hj = mj.diameter();
  const double mu = fp.mu, rho = fp.rho, sigma = ost.sigma();
  const double hmin = std::min({mi.h1(), mi.h2(), mj.h1(), mj.h2()});
  const auto pieces = surface_quadrature(*in.region_i, ci, &mj);
  std::vector<int> dofs(24);
  Eigen::Matrix<double, 24, 1> rl;
  Eigen::Matrix<double, 24, 24> Jl;

  for (const SurfacePiece& piece : pieces) {
    const CutterSegment& seg = in.region_i->segments[piece.segment];
    if (seg.kind != CouplingKind::FluidFluid || seg.source != in.partner) continue;
    const Vec2 n = seg.normal;  // out of field i, into the patch
    const Vec2 mid = 0.5 * (piece.rule.points.front() + piece.rule.points.back());
    const int ei = piece.element;
    const int ej = mj.locate(mid + 1e-7 * hmin * n);
    if (ej < 0 || !cj.active[ej]) throw std::runtime_error("fluid-fluid interface point outside the embedded patch");
    const int els[2] = {ei, ej};
    const CutConfiguration* cfgs[2] = {&ci, &cj};
    const FluidVectors* states[2] = {in.state_i, in.state_j};
    const FieldIndexing* idxs[2] = {&idx_i, &idx_j};
    std::array<RectQ1, 2> basis;
    std::array<std::array<int, 4>, 2> compact;
    std::array<AD24, 24> x;
    for (int s = 0; s < 2; ++s) {
      const auto& m = cfgs[s]->mesh;
      basis[s] = RectQ1{m.element_lower_left(els[s]), m.h1(), m.h2()};
      const auto nodes = m.element_nodes(els[s]);
      for (int a = 0; a < 4; ++a) {
        const int k = cfgs[s]->dofs.index[nodes[a]];
        if (k < 0) throw std::logic_error("coupling on element with inactive node");
        compact[s][a] = k;
        const int l = 12 * s + 3 * a;
        for (int c = 0; c < 2; ++c) {
          x[l + c] = AD24(states[s]->U[2 * k + c], 24, l + c);
          dofs[l + c] = idxs[s]->u(k, c);
        }
        x[l + 2] = AD24(states[s]->P[k], 24, l + 2);
        dofs[l + 2] = idxs[s]->p(k);
      }
    }
    const double phi_j = element_phi(cj, ej, *in.scaling_j, fp, sp, sigma);
    const double pen_t = np.gamma * mu * np.trace_constant / hj / 2.0;
    const double pen_n = np.gamma * rho * phi_j / hj / 2.0;

    std::array<AD24, 24> r;
    for (auto& v : r) v = AD24(0.0);
    for (std::size_t q = 0; q < piece.rule.size(); ++q) {
      const Vec2& xq = piece.rule.points[q];
      const double w = piece.rule.weights[q];
      const auto Ni = basis[0].values(xq);
      const auto Nj = basis[1].values(xq);
      const auto Gj = basis[1].gradients(xq);
      const auto ti = fluid_trace(Ni, basis[0].gradients(xq), x.data(), n, mu);
      const auto tj = fluid_trace(Nj, Gj, x.data() + 12, n, mu);

      AD24 jump[2];
      for (int c = 0; c < 2; ++c) jump[c] = ti.u[c] - tj.u[c];
      const AD24 jn = jump[0] * n[0] + jump[1] * n[1];
      AD24 flow(0.0);  // {rho u}.n
      double flow_frozen = 0.0;
      if (fp.convection) {
        flow = 0.5 * rho * ((ti.u[0] + tj.u[0]) * n[0] + (ti.u[1] + tj.u[1]) * n[1]);
        Vec2 c0 = Vec2::Zero(), c1 = Vec2::Zero();
        for (int a = 0; a < 4; ++a) {
          c0 += Ni[a] * nodal(*in.scaling_i, compact[0][a]);
          c1 += Nj[a] * nodal(*in.scaling_j, compact[1][a]);
        }
        flow_frozen = 0.5 * rho * (c0 + c1).dot(n);
      }
      const double upw = 0.5 * std::abs(flow_frozen);

      // Coefficient of [[v]] (i rows +, j rows -) and of {v} (both rows 1/2).
      AD24 cj_[2], ca[2];
      for (int c = 0; c < 2; ++c) {
        cj_[c] = -tj.flux[c] + tj.p * n[c] + pen_t * jump[c] + pen_n * jn * n[c] + upw * jump[c];
        ca[c] = flow * jump[c];
      }
      for (int a = 0; a < 4; ++a) {
        const double gn = Gj[a].dot(n);
        const AD24 gjmp = Gj[a][0] * jump[0] + Gj[a][1] * jump[1];
        for (int c = 0; c < 2; ++c) {
          r[3 * a + c] += w * (cj_[c] + 0.5 * ca[c]) * Ni[a];
          r[12 + 3 * a + c] +=
              w * ((-cj_[c] + 0.5 * ca[c]) * Nj[a] + np.adjoint_sign * mu * (jump[c] * gn + n[c] * gjmp));
        }
        r[12 + 3 * a + 2] += w * (-jn * Nj[a]);
      }
      if (diag) {
        diag->jump_l2_sq += w * (jump[0].value() * jump[0].value() + jump[1].value() * jump[1].value());
        diag->normal_flux_abs += w * std::abs(jn.value());
      }
    }
    extract<24>(r, rl, Jl);
    if (out) out->add_local(dofs, rl, Jl);
  }
}

}  // namespace fsi2d
