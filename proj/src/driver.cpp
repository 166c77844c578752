#include "fsi2d/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace fsi2d {

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Polygon box_polygon(const Box& b) { return {b.lo, Vec2(b.hi.x(), b.lo.y()), b.hi, Vec2(b.lo.x(), b.hi.y())}; }

// Sides of a CCW box polygon in edge order.
constexpr Side kEdgeSide[4] = {Side::Bottom, Side::Right, Side::Top, Side::Left};

std::vector<char> union_active(const std::vector<char>& a, const std::vector<char>& b) {
  if (a.empty()) return b;
  std::vector<char> u(a);
  for (std::size_t e = 0; e < u.size(); ++e) u[e] = u[e] || b[e];
  return u;
}

std::vector<std::vector<char>> union_active(const std::vector<std::vector<char>>& force, const Geometry& g) {
  std::vector<std::vector<char>> out(g.cfgs.size());
  for (std::size_t f = 0; f < g.cfgs.size(); ++f)
    out[f] = union_active(f < force.size() ? force[f] : std::vector<char>{}, g.cfgs[f].active);
  return out;
}

struct BlockNorms {
  double l2[3] = {0, 0, 0};
  double linf[3] = {0, 0, 0};
};

// Block 0: all velocity rows, 1: all pressure rows, 2: solid rows.
BlockNorms block_norms(const Layout& L, const Eigen::VectorXd& v) {
  BlockNorms n;
  auto add = [&](int b, double x) {
    n.l2[b] += x * x;
    n.linf[b] = std::max(n.linf[b], std::abs(x));
  };
  for (std::size_t f = 0; f < L.fields.size(); ++f) {
    for (int i = 0; i < 2 * L.nodes[f]; ++i) add(0, v[L.fields[f].u_offset + i]);
    for (int i = 0; i < L.nodes[f]; ++i) add(1, v[L.fields[f].p_offset + i]);
  }
  for (int i = 0; i < L.solid_dofs; ++i) add(2, v[L.solid_offset + i]);
  for (double& x : n.l2) x = std::sqrt(x);
  return n;
}

// Every block below tol * max(1, ref) in both norms.
bool below(const BlockNorms& v, const BlockNorms& ref, double tol) {
  for (int b = 0; b < 3; ++b)
    if (v.l2[b] > tol * std::max(1.0, ref.l2[b]) || v.linf[b] > tol * std::max(1.0, ref.linf[b])) return false;
  return true;
}

std::vector<FluidVectors> unpack_fluid(const Layout& L, const Eigen::VectorXd& x) {
  std::vector<FluidVectors> v(L.fields.size());
  for (std::size_t f = 0; f < L.fields.size(); ++f) {
    const int n = L.nodes[f];
    v[f] = FluidVectors::zeros(n);
    v[f].U = x.segment(L.fields[f].u_offset, 2 * n);
    v[f].P = x.segment(L.fields[f].p_offset, n);
  }
  return v;
}

Eigen::VectorXd pack_state(const Layout& L, const std::vector<FluidVectors>& fluid, const Eigen::VectorXd& D) {
  Eigen::VectorXd x(L.size);
  for (std::size_t f = 0; f < L.fields.size(); ++f) {
    x.segment(L.fields[f].u_offset, 2 * L.nodes[f]) = fluid[f].U;
    x.segment(L.fields[f].p_offset, L.nodes[f]) = fluid[f].P;
  }
  if (L.solid_dofs > 0) x.segment(L.solid_offset, L.solid_dofs) = D;
  return x;
}

template <class T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint is truncated");
  return v;
}
void write_vec(std::ostream& out, const Eigen::VectorXd& v) {
  write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(sizeof(double) * v.size()));
}
Eigen::VectorXd read_vec(std::istream& in) {
  const auto n = read_pod<std::uint64_t>(in);
  if (n > (1u << 28)) throw std::runtime_error("checkpoint vector size is corrupt");
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(sizeof(double) * n));
  if (!in) throw std::runtime_error("checkpoint is truncated");
  return v;
}

constexpr char kMagic[8] = {'F', 'S', 'I', '2', 'D', 'C', 'K', 'P'};
constexpr std::uint32_t kCheckpointVersion = 1;

}  // namespace

void DriverConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (steps < 0) throw std::invalid_argument("step count must be non-negative");
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
  if (!(theta_gamma > 0.0 && theta_gamma <= 1.0)) throw std::invalid_argument("theta_gamma must lie in (0, 1]");
  if (!(rho_inf >= 0.0 && rho_inf <= 1.0)) throw std::invalid_argument("rho_inf must lie in [0, 1]");
  if (!(tol > 0.0)) throw std::invalid_argument("Newton tolerance must be positive");
  if (max_newton < 1 || max_cycles < 1) throw std::invalid_argument("iteration limits must be at least 1");
  if (freeze_after < 1) throw std::invalid_argument("freeze_after must be at least 1");
}

void Problem::validate() const {
  if (fields.empty()) throw std::invalid_argument("at least one fluid field is required");
  fluid.validate();
  stab.validate();
  nitsche.validate();
  driver.validate();
  if (solid) solid->material.validate();
  const Box outer = fields[0].mesh.bounds();
  for (std::size_t j = 1; j < fields.size(); ++j) {
    const Box b = fields[j].mesh.bounds();
    if (!outer.contains(b.lo, 1e-12) || !outer.contains(b.hi, 1e-12))
      throw std::invalid_argument("embedded fluid patch must lie inside the background mesh");
  }
  for (int s = 0; s < 4; ++s) {
    if (fields[0].sides[s].kind == BcKind::Coupled) throw std::invalid_argument("background sides cannot be coupled");
    for (const auto& f : fields)
      if (f.sides[s].kind == BcKind::Velocity && !f.sides[s].velocity)
        throw std::invalid_argument("velocity boundary without a velocity function");
  }
}

bool Geometry::same_spaces(const Geometry& other) const {
  if (cfgs.size() != other.cfgs.size()) return false;
  for (std::size_t f = 0; f < cfgs.size(); ++f)
    if (!(cfgs[f].dofs == other.cfgs[f].dofs)) return false;
  return true;
}

Geometry build_geometry(const Problem& pb, const Eigen::VectorXd& D, const std::vector<std::vector<char>>& force_active,
                        int ghost_layers) {
  Geometry g;
  const int nf = static_cast<int>(pb.fields.size());
  g.regions.resize(nf);
  g.force_active = force_active;
  g.force_active.resize(nf);
  g.ghost_layers = ghost_layers;
  if (pb.solid) {
    g.iface = extract_interface(pb.solid->mesh, as_span(D));
    const Polygon outline = solid_outline(pb.solid->mesh, as_span(D));
    const Box sb = bounding_box(outline);
    g.solid_owner = 0;
    for (int j = 1; j < nf; ++j) {
      const Box pbx = pb.fields[j].mesh.bounds();
      if (pbx.contains(sb.lo) && pbx.contains(sb.hi)) g.solid_owner = j;
    }
    g.regions[g.solid_owner] = fluid_solid_region(outline, g.iface);
  }
  for (int j = 1; j < nf; ++j) {
    const Polygon rect = box_polygon(pb.fields[j].mesh.bounds());
    g.regions[0].polygons.push_back(rect);
    for (int k = 0; k < 4; ++k) {
      if (pb.fields[j].sides[static_cast<int>(kEdgeSide[k])].kind != BcKind::Coupled) continue;
      const Vec2 a = rect[k], b = rect[(k + 1) % 4];
      const Vec2 t = (b - a).normalized();
      g.regions[0].segments.push_back({a, b, Vec2(-t.y(), t.x()), CouplingKind::FluidFluid, j});
    }
  }
  g.cfgs.reserve(nf);
  for (int f = 0; f < nf; ++f) {
    CutOptions opts;
    opts.ghost_layers = ghost_layers;
    opts.force_active = g.force_active[f];
    g.cfgs.push_back(classify_and_cut(pb.fields[f].mesh, g.regions[f], opts));
  }
  return g;
}

Layout Layout::from(const Geometry& g, int solid_dofs) {
  Layout L;
  int off = 0;
  for (const auto& cfg : g.cfgs) {
    const int n = cfg.dofs.size();
    L.fields.push_back({off, off + 2 * n});
    L.nodes.push_back(n);
    off += 3 * n;
  }
  L.solid_offset = off;
  L.solid_dofs = solid_dofs;
  L.size = off + solid_dofs;
  return L;
}

std::vector<int> Layout::block_sizes() const {
  std::vector<int> s;
  for (int n : nodes) {
    s.push_back(2 * n);
    s.push_back(n);
  }
  if (solid_dofs > 0) s.push_back(solid_dofs);
  return s;
}

CoupledAssembler::CoupledAssembler(const Problem& pb, const SolidOperator* op) : pb_(&pb), op_(op) {}

CoupledSystem CoupledAssembler::assemble(const Geometry& g, const Layout& L, const Eigen::VectorXd& x,
                                         const std::vector<Eigen::VectorXd>& scaling, const StepContext& ctx) const {
  const Problem& pb = *pb_;
  CoupledSystem sys{SystemBuilder(L.size), {}, {}};
  const auto state = unpack_fluid(L, x);
  for (std::size_t f = 0; f < g.cfgs.size(); ++f) {
    const FluidAssemblyInput in{&g.cfgs[f], &state[f], &ctx.history[f], &scaling[f], ctx.time};
    assemble_fluid(in, pb.fluid, pb.stab, ctx.ost, L.fields[f], sys.builder);
    assemble_ghost_penalty(in, pb.fluid, pb.stab, ctx.ost, L.fields[f], sys.builder);
  }
  for (std::size_t j = 1; j < g.cfgs.size(); ++j) {
    const FfCouplingInput in{&g.cfgs[0], &g.cfgs[j], &g.regions[0], static_cast<int>(j),
                             &state[0],  &state[j],  &scaling[0],   &scaling[j]};
    assemble_ff_coupling(in, pb.fluid, pb.stab, pb.nitsche, ctx.ost, L.fields[0], L.fields[j], &sys.builder, &sys.ff);
  }
  if (!pb.solid) return sys;

  const Eigen::VectorXd D = x.segment(L.solid_offset, L.solid_dofs);
  if (!pb.solid->rigid) {
    SparseMatrix K;
    const Eigen::VectorXd fint = op_->internal_force(D, &K);
    Eigen::VectorXd R;
    SparseMatrix J;
    if (ctx.ost.steady) {
      R = fint - ctx.fext;
      J = K;
    } else {
      const double af = ctx.ga.alpha_f;
      const double c = genalpha_mass_coefficient(ctx.ost.dt, ctx.ga);
      R = genalpha_residual(op_->mass(), D, fint, ctx.fext, ctx.solid_prev, ctx.fint_prev, ctx.fext_prev, ctx.ost.dt,
                            ctx.ga) /
              (1.0 - af) +
          (af / (1.0 - af)) * ctx.coupling_prev;
      J = (c * op_->mass() + (1.0 - af) * K) / (1.0 - af);
    }
    for (int i = 0; i < L.solid_dofs; ++i) sys.builder.add_residual(L.solid_offset + i, R[i]);
    for (int r = 0; r < J.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(J, r); it; ++it)
        sys.builder.add_jacobian(L.solid_offset + r, L.solid_offset + static_cast<int>(it.col()), it.value());
  }
  const int o = g.solid_owner;
  FsCouplingInput in;
  in.cfg = &g.cfgs[o];
  in.region = &g.regions[o];
  in.iface = &g.iface;
  in.state = &state[o];
  in.scaling = &scaling[o];
  in.kin = {&D, &ctx.solid_prev.D, &ctx.solid_prev.U, ctx.theta_gamma, ctx.ost.dt, ctx.ost.steady};
  assemble_fs_coupling(in, pb.fluid, pb.nitsche, ctx.ost, L.fields[o], L.solid_offset, L.solid_dofs, &sys.builder,
                       &sys.fs);
  return sys;
}

void CoupledAssembler::dirichlet(const Geometry& g, const Layout& L, double t, std::vector<int>& dofs,
                                 std::vector<double>& values) const {
  const Problem& pb = *pb_;
  dofs.clear();
  values.clear();
  for (std::size_t f = 0; f < g.cfgs.size(); ++f) {
    const auto& cfg = g.cfgs[f];
    const auto& mesh = cfg.mesh;
    for (int k = 0; k < cfg.dofs.size(); ++k) {
      const int node = cfg.dofs.nodes[k];
      const SideCondition* wall = nullptr;
      const SideCondition* vel = nullptr;
      for (int s = 0; s < 4; ++s) {
        if (!mesh.on_side(node, static_cast<Side>(s))) continue;
        const auto& sc = pb.fields[f].sides[s];
        if (sc.kind == BcKind::Wall) wall = &sc;
        if (sc.kind == BcKind::Velocity && !vel) vel = &sc;
      }
      if (!wall && !vel) continue;
      const Vec2 u = wall ? Vec2::Zero() : vel->velocity(mesh.node(node), t);
      for (int c = 0; c < 2; ++c) {
        dofs.push_back(L.fields[f].u(k, c));
        values.push_back(u[c]);
      }
    }
  }
  if (pb.pressure_pin) {
    const auto& cfg = g.cfgs[0];
    int best = -1;
    double dmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < cfg.dofs.size(); ++k) {
      const int node = cfg.dofs.nodes[k];
      if (cfg.dofs.role[node] != DofRole::Standard) continue;
      const double d = (cfg.mesh.node(node) - *pb.pressure_pin).norm();
      if (d < dmin) dmin = d, best = k;
    }
    if (best < 0) throw std::runtime_error("no standard pressure DOF to pin");
    dofs.push_back(L.fields[0].p(best));
    values.push_back(0.0);
  }
  if (pb.solid) {
    std::vector<int> nodes;
    if (pb.solid->rigid) {
      for (int a = 0; a < pb.solid->mesh.num_nodes(); ++a) nodes.push_back(a);
    } else {
      nodes = pb.solid->mesh.clamped_nodes();
    }
    for (int a : nodes)
      for (int c = 0; c < 2; ++c) {
        dofs.push_back(L.solid_offset + 2 * a + c);
        values.push_back(0.0);
      }
  }
}

Simulation::Simulation(Problem pb) : pb_(std::move(pb)) {
  pb_.validate();
  if (pb_.solid) op_ = std::make_unique<SolidOperator>(pb_.solid->mesh, pb_.solid->material);
  ga_ = GenAlphaParams::from_rho_inf(pb_.driver.rho_inf);
  set_initial_state();
}

void Simulation::set_initial_state() {
  step_ = 0;
  time_ = pb_.t0;
  const int nd = pb_.solid ? pb_.solid->mesh.num_dofs() : 0;
  solid_ = {Eigen::VectorXd::Zero(nd), Eigen::VectorXd::Zero(nd), Eigen::VectorXd::Zero(nd)};
  coupling_ = Eigen::VectorXd::Zero(nd);
  if (pb_.solid && !pb_.solid->rigid && pb_.solid->body_force.norm() > 0.0) {
    const Eigen::VectorXd rhs = op_->body_force(pb_.solid->body_force) - op_->internal_force(solid_.D);
    std::vector<int> fixed;
    std::vector<double> zero;
    for (int a : pb_.solid->mesh.clamped_nodes())
      for (int c = 0; c < 2; ++c) fixed.push_back(2 * a + c), zero.push_back(0.0);
    SparseMatrix M = op_->mass();
    Eigen::VectorXd r = rhs;
    apply_dirichlet(M, r, fixed, zero);
    solid_.A = factor_solve(M, r);
  }
  geom_ = build_geometry(pb_, solid_.D, {}, 0);
  layout_ = Layout::from(geom_, nd);
  fluid_.clear();
  for (const auto& cfg : geom_.cfgs) {
    FluidVectors v = FluidVectors::zeros(cfg.dofs.size());
    if (pb_.initial_velocity)
      for (int k = 0; k < cfg.dofs.size(); ++k)
        v.U.segment<2>(2 * k) = pb_.initial_velocity(cfg.mesh.node(cfg.dofs.nodes[k]), pb_.t0);
    fluid_.push_back(std::move(v));
  }
}

Eigen::VectorXd Simulation::predictor() const {
  if (pb_.driver.predictor == Predictor::Velocity && !pb_.driver.steady) return solid_.D + pb_.driver.dt * solid_.U;
  return solid_.D;
}

StepContext Simulation::make_context(double t, double theta) const {
  StepContext ctx;
  ctx.time = t;
  ctx.ost.theta = theta;
  ctx.ost.dt = pb_.driver.dt;
  ctx.ost.steady = pb_.driver.steady;
  ctx.ga = ga_;
  ctx.theta_gamma = pb_.driver.theta_gamma;
  ctx.solid_prev = solid_;
  ctx.coupling_prev = coupling_;
  if (pb_.solid && !pb_.solid->rigid) {
    ctx.fint_prev = op_->internal_force(solid_.D);
    ctx.fext = op_->body_force(pb_.solid->body_force);
    ctx.fext_prev = ctx.fext;
  }
  return ctx;
}

Eigen::VectorXd Simulation::pack() const { return pack_state(layout_, fluid_, solid_.D); }

StepReport Simulation::step() {
  const DriverConfig& dc = pb_.driver;
  const int n = step_ + 1;
  const double t = dc.steady ? pb_.t0 + n * dc.dt : time_ + dc.dt;
  const double theta = (n == 1) ? 1.0 : dc.theta;
  const CoupledAssembler assembler(pb_, op_.get());
  const int nd = layout_.solid_dofs;

  bool frozen = dc.freeze;
  std::vector<std::vector<char>> force;
  int layers = frozen ? 1 : 0;
  const Eigen::VectorXd D0 = predictor();
  if (frozen) force = union_active({}, geom_);
  Geometry G = build_geometry(pb_, D0, force, layers);
  if (frozen) {
    force = union_active(force, G);
    G = build_geometry(pb_, D0, force, layers);
  }

  StepContext ctx = make_context(t, theta);
  auto project_history = [&](const Geometry& target) {
    ctx.history.clear();
    for (std::size_t f = 0; f < target.cfgs.size(); ++f)
      ctx.history.push_back(project_fluid(geom_.cfgs[f], target.cfgs[f], fluid_[f]));
  };
  project_history(G);
  Layout L = Layout::from(G, nd);
  Eigen::VectorXd x = pack_state(L, ctx.history, D0);

  std::vector<int> ddofs;
  std::vector<double> dvals;
  auto impose = [&](Eigen::VectorXd& y) {
    assembler.dirichlet(G, L, t, ddofs, dvals);
    for (std::size_t k = 0; k < ddofs.size(); ++k) y[ddofs[k]] = dvals[k];
  };
  impose(x);

  StepReport rep;
  rep.step = n;
  rep.time = t;
  int changes = 0;
  int iter_in_cycle = 0;
  const BlockNorms unit;
  BlockNorms dnorm;
  CoupledSystem sys;
  while (true) {
    if (iter_in_cycle >= dc.max_newton)
      throw NewtonFailure("maximum number of Newton-Raphson iterations reached! (step " + std::to_string(n) + ")");
    std::vector<Eigen::VectorXd> scaling;
    for (std::size_t f = 0; f < G.cfgs.size(); ++f) scaling.push_back(x.segment(L.fields[f].u_offset, 2 * L.nodes[f]));
    sys = assembler.assemble(G, L, x, scaling, ctx);
    SparseMatrix A = sys.builder.matrix();
    Eigen::VectorXd r = sys.builder.residual();
    assembler.dirichlet(G, L, t, ddofs, dvals);
    std::vector<double> xmg(ddofs.size());
    for (std::size_t k = 0; k < ddofs.size(); ++k) xmg[k] = x[ddofs[k]] - dvals[k];
    apply_dirichlet(A, r, ddofs, xmg);
    const BlockNorms rn = block_norms(L, r);
    rep.residual_history.push_back(r.norm());
    if (iter_in_cycle > 0 && below(rn, unit, dc.tol) && below(dnorm, block_norms(L, x), dc.tol)) {
      rep.final_residual = r.norm();
      break;
    }
    if (!dc.matrix_market_dir.empty())
      write_matrix_market(dc.matrix_market_dir + "/step" + std::to_string(n) + "_iter" +
                              std::to_string(rep.newton_iterations) + ".mtx",
                          A);
    const Eigen::VectorXd delta = factor_solve(A, -r);
    ++rep.newton_iterations;
    ++iter_in_cycle;

    double alpha = 1.0;
    Eigen::VectorXd xc;
    Geometry G2;
    for (int h = 0;; ++h) {
      xc = x + alpha * delta;
      bool ok = true;
      if (pb_.solid) {
        const Eigen::VectorXd Dc = xc.segment(L.solid_offset, nd);
        try {
          ok = op_->min_jacobian(Dc) > 0.0;
          if (ok) G2 = build_geometry(pb_, Dc, force, layers);
        } catch (const ElementInversion&) {
          ok = false;
        } catch (const GeometryError&) {
          ok = false;
        }
      } else {
        G2 = G;
      }
      if (ok) break;
      if (h >= dc.max_halvings) throw NewtonFailure("solid element inversion persists after step halving");
      alpha *= 0.5;
    }
    dnorm = block_norms(L, alpha * delta);
    x = xc;

    if (!G2.same_spaces(G)) {
      ++changes;
      if (changes > dc.max_cycles)
        throw NewtonFailure("maximum number of function space changes at t^n exceeded! (step " + std::to_string(n) + ")");
      const Eigen::VectorXd D = x.segment(L.solid_offset, nd);
      if (!frozen && changes >= dc.freeze_after) {
        frozen = true;
        layers = 1;
        force = union_active(union_active({}, G), G2);
        G2 = build_geometry(pb_, D, force, layers);
      } else if (frozen) {
        force = union_active(force, G2);
        G2 = build_geometry(pb_, D, force, layers);
      }
      std::vector<FluidVectors> cur = unpack_fluid(L, x);
      for (std::size_t f = 0; f < cur.size(); ++f) cur[f] = project_fluid(G.cfgs[f], G2.cfgs[f], cur[f]);
      project_history(G2);
      G = std::move(G2);
      L = Layout::from(G, nd);
      x = pack_state(L, cur, D);
      impose(x);
      iter_in_cycle = 0;
      continue;
    }
    G = std::move(G2);
  }

  // Accept the step.
  std::vector<FluidVectors> fl = unpack_fluid(L, x);
  for (std::size_t f = 0; f < fl.size(); ++f)
    fl[f].A = dc.steady ? Eigen::VectorXd::Zero(fl[f].U.size())
                        : fluid_acceleration_update(fl[f].U, ctx.history[f].U, ctx.history[f].A, theta, dc.dt);
  if (pb_.solid) {
    const Eigen::VectorXd D = x.segment(L.solid_offset, nd);
    if (dc.steady || pb_.solid->rigid)
      solid_ = {D, Eigen::VectorXd::Zero(nd), Eigen::VectorXd::Zero(nd)};
    else
      solid_ = genalpha_update(D, solid_, dc.dt, ga_);
    coupling_ = sys.fs.solid_rows;
  }
  fluid_ = std::move(fl);
  geom_ = std::move(G);
  layout_ = L;
  step_ = n;
  time_ = t;
  last_ctx_ = std::move(ctx);

  rep.cycles = changes;
  rep.frozen = frozen;
  rep.jump_l2 = std::sqrt(sys.fs.jump_l2_sq);
  rep.fluid_force = sys.fs.fluid_sum;
  rep.solid_force = sys.fs.solid_sum;
  rep.ff_mass_defect = sys.ff.normal_flux_abs;
  rep.probe_displacement = probe_displacements();
  return rep;
}

std::vector<StepReport> Simulation::run(int steps, const std::function<void(const StepReport&)>& on_step) {
  std::vector<StepReport> out;
  for (int i = 0; i < steps; ++i) {
    out.push_back(step());
    if (on_step) on_step(out.back());
  }
  return out;
}

CoupledSystem Simulation::reassemble() const {
  if (step_ == 0) throw std::logic_error("reassemble needs a converged step");
  const CoupledAssembler assembler(pb_, op_.get());
  const Eigen::VectorXd x = pack();
  std::vector<Eigen::VectorXd> scaling;
  for (const auto& f : fluid_) scaling.push_back(f.U);
  return assembler.assemble(geom_, layout_, x, scaling, last_ctx_);
}

std::vector<Vec2> Simulation::probe_displacements() const {
  std::vector<Vec2> out;
  if (!pb_.solid) return out;
  for (const Vec2& X : pb_.probes) out.push_back(interpolate_solid(pb_.solid->mesh, solid_.D, X));
  return out;
}

void Simulation::save_checkpoint(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kCheckpointVersion);
  write_pod<std::int32_t>(out, step_);
  write_pod(out, time_);
  write_pod<std::int32_t>(out, geom_.ghost_layers);
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(fluid_.size()));
  for (std::size_t f = 0; f < fluid_.size(); ++f) {
    const auto& fa = geom_.force_active[f];
    write_pod<std::uint64_t>(out, fa.size());
    out.write(fa.data(), static_cast<std::streamsize>(fa.size()));
    write_vec(out, fluid_[f].U);
    write_vec(out, fluid_[f].P);
    write_vec(out, fluid_[f].A);
  }
  write_vec(out, solid_.D);
  write_vec(out, solid_.U);
  write_vec(out, solid_.A);
  write_vec(out, coupling_);
  // The step context is rebuilt from the state except the projected history.
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(last_ctx_.history.size()));
  for (const auto& h : last_ctx_.history) {
    write_vec(out, h.U);
    write_vec(out, h.P);
    write_vec(out, h.A);
  }
  write_vec(out, last_ctx_.solid_prev.D);
  write_vec(out, last_ctx_.solid_prev.U);
  write_vec(out, last_ctx_.solid_prev.A);
  write_vec(out, last_ctx_.coupling_prev);
  write_pod(out, last_ctx_.ost.theta);
  if (!out) throw std::runtime_error("failed to write checkpoint");
}

void Simulation::load_checkpoint(std::istream& in) {
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw std::runtime_error("not a checkpoint file");
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kCheckpointVersion) throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  const int step = read_pod<std::int32_t>(in);
  const double time = read_pod<double>(in);
  const int layers = read_pod<std::int32_t>(in);
  const auto nf = read_pod<std::uint32_t>(in);
  if (nf != pb_.fields.size()) throw std::runtime_error("checkpoint field count does not match the case");
  std::vector<std::vector<char>> force(nf);
  std::vector<FluidVectors> fluid(nf);
  for (std::uint32_t f = 0; f < nf; ++f) {
    const auto n = read_pod<std::uint64_t>(in);
    if (n != 0 && n != static_cast<std::uint64_t>(pb_.fields[f].mesh.num_elements()))
      throw std::runtime_error("checkpoint mesh does not match the case");
    force[f].resize(n);
    in.read(force[f].data(), static_cast<std::streamsize>(n));
    fluid[f].U = read_vec(in);
    fluid[f].P = read_vec(in);
    fluid[f].A = read_vec(in);
  }
  SolidState s;
  s.D = read_vec(in);
  s.U = read_vec(in);
  s.A = read_vec(in);
  const Eigen::VectorXd coupling = read_vec(in);
  const int nd = pb_.solid ? pb_.solid->mesh.num_dofs() : 0;
  if (s.D.size() != nd) throw std::runtime_error("checkpoint solid does not match the case");

  StepContext ctx;
  const auto nh = read_pod<std::uint32_t>(in);
  for (std::uint32_t f = 0; f < nh; ++f) {
    FluidVectors h;
    h.U = read_vec(in);
    h.P = read_vec(in);
    h.A = read_vec(in);
    ctx.history.push_back(std::move(h));
  }
  ctx.solid_prev.D = read_vec(in);
  ctx.solid_prev.U = read_vec(in);
  ctx.solid_prev.A = read_vec(in);
  ctx.coupling_prev = read_vec(in);
  const double theta = read_pod<double>(in);

  Geometry g = build_geometry(pb_, s.D, force, layers);
  for (std::uint32_t f = 0; f < nf; ++f)
    if (fluid[f].P.size() != g.cfgs[f].dofs.size()) throw std::runtime_error("checkpoint fluid space does not match");

  step_ = step;
  time_ = time;
  solid_ = std::move(s);
  coupling_ = coupling;
  fluid_ = std::move(fluid);
  geom_ = std::move(g);
  layout_ = Layout::from(geom_, nd);
  // Rebuild the remaining context pieces from their definitions.
  const SolidState keep_prev = ctx.solid_prev;
  StepContext full = make_context(time_, theta);
  full.solid_prev = keep_prev;
  full.coupling_prev = ctx.coupling_prev;
  full.history = std::move(ctx.history);
  if (pb_.solid && !pb_.solid->rigid && keep_prev.D.size() == nd) full.fint_prev = op_->internal_force(keep_prev.D);
  last_ctx_ = std::move(full);
}

void Simulation::save_checkpoint(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  save_checkpoint(out);
}

void Simulation::load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  load_checkpoint(in);
}

Vec2 interpolate_solid(const SolidMesh& mesh, const Eigen::VectorXd& D, const Vec2& X) {
  static const double sx[4] = {-1, 1, 1, -1}, sy[4] = {-1, -1, 1, 1};
  for (const auto& el : mesh.elements) {
    Vec2 xi = Vec2::Zero();
    bool ok = false;
    for (int it = 0; it < 30; ++it) {
      Vec2 x = Vec2::Zero();
      Mat2 J = Mat2::Zero();
      for (int a = 0; a < 4; ++a) {
        const double N = 0.25 * (1 + sx[a] * xi.x()) * (1 + sy[a] * xi.y());
        const Vec2 dN(0.25 * sx[a] * (1 + sy[a] * xi.y()), 0.25 * sy[a] * (1 + sx[a] * xi.x()));
        x += N * mesh.X[el[a]];
        J += mesh.X[el[a]] * dN.transpose();
      }
      const Vec2 step = J.inverse() * (X - x);
      xi += step;
      if (step.norm() < 1e-14) {
        ok = true;
        break;
      }
    }
    if (!ok || std::abs(xi.x()) > 1 + 1e-9 || std::abs(xi.y()) > 1 + 1e-9) continue;
    Vec2 d = Vec2::Zero();
    for (int a = 0; a < 4; ++a)
      d += 0.25 * (1 + sx[a] * xi.x()) * (1 + sy[a] * xi.y()) * Vec2(D[2 * el[a]], D[2 * el[a] + 1]);
    return d;
  }
  throw std::invalid_argument("probe point lies outside the solid");
}

double FluidError::velocity_l2() const { return std::sqrt(u_sq); }

double FluidError::pressure_l2() const { return std::sqrt(std::max(0.0, p_sq - p_int * p_int / area)); }

FluidError& FluidError::operator+=(const FluidError& o) {
  u_sq += o.u_sq;
  p_int += o.p_int;
  p_sq += o.p_sq;
  area += o.area;
  return *this;
}

FluidError fluid_error(const CutConfiguration& cfg, const FluidVectors& v, const VectorField& u, const ScalarField& p,
                       double t) {
  FluidError err;
  for (int e = 0; e < cfg.mesh.num_elements(); ++e) {
    if (!cfg.active[e] || cfg.element_class[e] == ElementClass::Outside) continue;
    const QuadratureRule rule = element_volume_rule(cfg, e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[q];
      const double w = rule.weights[q];
      const FluidPointValue h = evaluate_fluid(cfg, v, e, x);
      err.u_sq += w * (h.u - u(x, t)).squaredNorm();
      const double dp = h.p - (p ? p(x, t) : 0.0);
      err.p_int += w * dp;
      err.p_sq += w * dp * dp;
      err.area += w;
    }
  }
  return err;
}

}  // namespace fsi2d
