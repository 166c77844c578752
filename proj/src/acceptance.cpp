#include "fsi2d/acceptance.hpp"

#include "fsi2d/cases.hpp"
#include "fsi2d/jump_average.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fsi2d {

namespace {

constexpr double kPi = std::numbers::pi;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "/" : "") + sci(v[i]);
  return s;
}

std::vector<double> rates(const std::vector<double>& err) {
  std::vector<double> r;
  for (std::size_t i = 1; i < err.size(); ++i) r.push_back(std::log2(err[i - 1] / err[i]));
  return r;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

ExcludedRegion polygon_region(const Polygon& p) {
  ExcludedRegion r;
  r.polygons.push_back(p);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CutterSegment s;
    s.a = p[i];
    s.b = p[(i + 1) % p.size()];
    const Vec2 t = (s.b - s.a).normalized();
    s.normal = Vec2(-t.y(), t.x());
    s.source = static_cast<int>(i);
    r.segments.push_back(s);
  }
  return r;
}

CriterionResult c1_geometry(const AcceptanceOptions& opt) {
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 16, 16);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> pos(0.3, 0.7), rad(0.08, 0.2), ph(0.0, 2 * kPi);
  std::uniform_int_distribution<int> nv(3, 12);
  double area_err = 0.0, len_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec2 c(pos(rng), pos(rng));
    const double r = rad(rng), phase = ph(rng);
    const int n = nv(rng);
    Polygon p;
    for (int k = 0; k < n; ++k) {
      const double t = phase + 2 * kPi * k / n;
      p.emplace_back(c.x() + r * std::cos(t), c.y() + r * std::sin(t));
    }
    const auto cfg = classify_and_cut(mesh, polygon_region(p));
    area_err = std::max(area_err, std::abs(cfg.total_fluid_area() + signed_area(p) - 1.0));
    double len = 0.0, perim = 0.0;
    for (const auto& piece : cfg.surface) len += piece.rule.weight_sum();
    for (std::size_t i = 0; i < p.size(); ++i) perim += (p[(i + 1) % p.size()] - p[i]).norm();
    len_err = std::max(len_err, std::abs(len - perim) / perim);
  }
  const double tol = 1e-12 * opt.tol_scale;
  return {1, "geometry-quadrature", area_err <= tol && len_err <= tol,
          "area partition " + sci(area_err) + ", interface length " + sci(len_err) + " (50 placements, 16x16)"};
}

CriterionResult c2_jump(const AcceptanceOptions& opt) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0), w01(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double wi = w01(rng);
    const AverageWeights w(wi, 1.0 - wi);
    const double fi = u(rng), fj = u(rng), gi = u(rng), gj = u(rng);
    const double lhs = jump(fi * gi, fj * gj);
    const double rhs = jump(fi, fj) * weighted_average(gi, gj, w) + conjugate_average(fi, fj, w) * jump(gi, gj);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return {2, "jump-average", worst <= 1e-14 * opt.tol_scale, "max identity defect " + sci(worst) + " (1000 samples)"};
}

CriterionResult c3_solid_statics(const AcceptanceOptions& opt) {
  NeoHookean m;
  m.nu = 0.3;
  m.E = 2.0 * (1.0 + m.nu);
  Mat2 F;
  F << 1.0, 0.1, 0.0, 1.0;
  Mat2 ref;
  ref << -0.01, 0.1, 0.1, 0.0;
  const double s_err = (pk2_stress(F, m) - ref).cwiseAbs().maxCoeff();

  const auto mesh = make_rectangle_solid(Vec2(0, 0), Vec2(1, 0.4), 3, 2,
                                         {BoundaryTag::Free, BoundaryTag::Free, BoundaryTag::Clamped, BoundaryTag::Free});
  const SolidOperator op(mesh, {500.0, 0.4, 250.0});
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.03, 0.03);
  Eigen::VectorXd D(op.num_dofs());
  for (int i = 0; i < D.size(); ++i) D[i] = u(rng);
  SparseMatrix K;
  op.internal_force(D, &K);
  Eigen::MatrixXd Kfd(D.size(), D.size());
  const double eps = 1e-6;
  for (int j = 0; j < D.size(); ++j) {
    Eigen::VectorXd Dp = D, Dm = D;
    Dp[j] += eps;
    Dm[j] -= eps;
    Kfd.col(j) = (op.internal_force(Dp) - op.internal_force(Dm)) / (2 * eps);
  }
  const Eigen::MatrixXd Kd(K);
  const double t_err = (Kd - Kfd).norm() / Kd.norm();
  return {3, "solid-statics", s_err <= 1e-10 * opt.tol_scale && t_err < 1e-6 * opt.tol_scale,
          "simple shear S error " + sci(s_err) + ", tangent vs FD " + sci(t_err)};
}

double sdof_error(double dt, double T) {
  const double m = 1.0, k = 4.0 * kPi * kPi;
  const auto p = GenAlphaParams::from_rho_inf(1.0);
  SparseMatrix M(1, 1);
  M.insert(0, 0) = m;
  SolidState s{Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, -k / m)};
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  const int n = static_cast<int>(std::lround(T / dt));
  double err = 0.0;
  for (int step = 1; step <= n; ++step) {
    const Eigen::VectorXd D0 = s.D;
    const Eigen::VectorXd r0 = genalpha_residual(M, D0, k * D0, zero, s, k * s.D, zero, dt, p);
    const double jac = genalpha_mass_coefficient(dt, p) * m + (1.0 - p.alpha_f) * k;
    s = genalpha_update(D0 - r0 / jac, s, dt, p);
    err = std::max(err, std::abs(s.D[0] - std::cos(2 * kPi * step * dt)));
  }
  return err;
}

CriterionResult c4_solid_dynamics(const AcceptanceOptions&) {
  const double T = 1.0;
  const std::vector<double> err{sdof_error(T / 40, T), sdof_error(T / 80, T), sdof_error(T / 160, T)};
  const auto r = rates(err);
  return {4, "solid-dynamics", min_of(r) >= 1.9, "errors " + list(err) + ", rates " + list(r)};
}

CriterionResult c5_fitted_fluid(const AcceptanceOptions&) {
  const auto t0 = std::chrono::steady_clock::now();
  cases::Manufactured m;
  std::vector<double> eu, ep;
  for (int n : {8, 16, 32}) {
    Simulation sim(cases::manufactured_box(n, m, 0.1, 2));
    sim.run(2);
    const auto e = fluid_error(
        sim.geometry().cfgs[0], sim.fluid()[0], [&](const Vec2& x, double t) { return m.velocity(x, t); },
        [&](const Vec2& x, double t) { return m.pressure(x, t); }, sim.time());
    eu.push_back(e.velocity_l2());
    ep.push_back(e.pressure_l2());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto ru = rates(eu), rp = rates(ep);
  return {5, "fitted-fluid", min_of(ru) >= 1.8 && min_of(rp) >= 0.9 && secs < 120.0,
          "velocity L2 " + list(eu) + " rates " + list(ru) + "; pressure L2 " + list(ep) + " rates " + list(rp)};
}

CriterionResult c6_unfitted_fluid(const AcceptanceOptions&) {
  cases::Poiseuille pc;
  std::vector<double> eu;
  for (int n : {8, 16, 32}) {
    Simulation sim(cases::poiseuille_channel(n, pc));
    sim.step();
    eu.push_back(fluid_error(
                     sim.geometry().cfgs[0], sim.fluid()[0], [&](const Vec2& x, double) { return pc.velocity(x); }, {},
                     0.0)
                     .velocity_l2());
  }
  const auto r = rates(eu);
  return {6, "unfitted-fluid", min_of(r) >= 1.8,
          "wall at y = " + sci(pc.wall) + ", velocity L2 " + list(eu) + " rates " + list(r)};
}

// Stokes-like system on a 10x10 mesh with a rigid wall at (3 - eps) h.
double cut_condition(double eps, bool ghost_penalty) {
  const int n = 10;
  const double h = 1.0 / n;
  Problem pb;
  FluidField f{StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), n, n), {}};
  f.sides[static_cast<int>(Side::Top)].kind = BcKind::Traction;
  pb.fields.push_back(f);
  SolidSpec s;
  s.mesh = make_rectangle_solid(Vec2(0, 0), Vec2(1, (3.0 - eps) * h), 2, 1,
                                {BoundaryTag::Free, BoundaryTag::Free, BoundaryTag::Free, BoundaryTag::Wet});
  s.rigid = true;
  pb.solid = s;
  pb.fluid.mu = 1.0;
  pb.fluid.convection = false;
  pb.stab.ghost_penalty = ghost_penalty;
  pb.driver.steady = true;

  const Eigen::VectorXd D0 = Eigen::VectorXd::Zero(s.mesh.num_dofs());
  const Geometry g = build_geometry(pb, D0, {}, 0);
  const Layout L = Layout::from(g, s.mesh.num_dofs());
  StepContext ctx;
  ctx.ost.steady = true;
  for (const auto& cfg : g.cfgs) ctx.history.push_back(FluidVectors::zeros(cfg.dofs.size()));
  ctx.solid_prev = {D0, D0, D0};
  ctx.coupling_prev = D0;
  std::vector<Eigen::VectorXd> scaling;
  for (const auto& cfg : g.cfgs) scaling.push_back(Eigen::VectorXd::Zero(2 * cfg.dofs.size()));
  const CoupledAssembler assembler(pb, nullptr);
  const CoupledSystem sys = assembler.assemble(g, L, Eigen::VectorXd::Zero(L.size), scaling, ctx);
  std::vector<int> dofs;
  std::vector<double> vals;
  assembler.dirichlet(g, L, 0.0, dofs, vals);
  std::vector<char> fixed(L.size, 0);
  for (int d : dofs) fixed[d] = 1;
  std::vector<int> keep;
  for (int i = 0; i < L.size; ++i)
    if (!fixed[i]) keep.push_back(i);
  const Eigen::MatrixXd A(sys.builder.matrix());
  Eigen::MatrixXd Ar(keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) Ar(i, j) = A(keep[i], keep[j]);
  return condition_number(Ar);
}

CriterionResult c7_conditioning(const AcceptanceOptions&) {
  std::vector<double> on, off;
  for (double eps : {0.5, 0.1, 0.01, 0.001}) {
    on.push_back(cut_condition(eps, true));
    off.push_back(cut_condition(eps, false));
  }
  const double spread = *std::max_element(on.begin(), on.end()) / *std::min_element(on.begin(), on.end());
  const double growth = off.back() / off.front();
  return {7, "ghost-penalty-conditioning", spread < 10.0 && growth > 1e3,
          "cond with GP " + list(on) + " (spread " + sci(spread) + "); without GP " + list(off) + " (growth " +
              sci(growth) + ")"};
}

CriterionResult c8_projection(const AcceptanceOptions& opt) {
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 10, 10);
  auto with_box = [&](const Vec2& lo, const Vec2& hi) {
    ExcludedRegion r;
    r.polygons.push_back({lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())});
    return classify_and_cut(mesh, r);
  };
  auto linear = [&](const CutConfiguration& cfg) {
    Eigen::VectorXd v(cfg.dofs.size());
    for (int k = 0; k < cfg.dofs.size(); ++k) {
      const Vec2 x = mesh.node(cfg.dofs.nodes[k]);
      v[k] = 0.3 - 1.7 * x.x() + 2.9 * x.y();
    }
    return v;
  };
  const auto a = with_box(Vec2(0.33, 0.33), Vec2(0.67, 0.67));
  FluidVectors v = FluidVectors::zeros(a.dofs.size());
  for (int i = 0; i < v.U.size(); ++i) v.U[i] = std::sin(1.0 + i), v.A[i] = std::cos(2.0 * i);
  for (int i = 0; i < v.P.size(); ++i) v.P[i] = std::exp(-0.1 * i);
  const FluidVectors w = project_fluid(a, a, v);
  const bool identity = w.U == v.U && w.P == v.P && w.A == v.A;

  const auto prev = with_box(Vec2(0.13, 0.23), Vec2(0.87, 0.77));
  const auto curr = with_box(Vec2(0.22, 0.32), Vec2(0.78, 0.68));
  const PartialValues pv = transfer_copy(prev, curr, linear(prev), 1);
  const double ext_err = (extension_solve(curr, pv.values, pv.corr, 1) - linear(curr)).cwiseAbs().maxCoeff();
  const int freed = pv.corr.count(DofStatus::NeedsExtension);

  bool raised = false;
  try {
    transfer_copy(a, with_box(Vec2(0.52, 0.33), Vec2(0.67, 0.67)), Eigen::VectorXd::Zero(a.dofs.size()), 1);
  } catch (const CflViolation& e) {
    raised = std::string(e.what()).find("the CFL-like condition is not satisfied!") != std::string::npos;
  }
  return {8, "projection", identity && ext_err <= 1e-10 * opt.tol_scale && raised,
          std::string("identity ") + (identity ? "bitwise" : "differs") + ", linear extension error " + sci(ext_err) +
              " at " + std::to_string(freed) + " freed DOFs, CFL violation " + (raised ? "raised" : "missed")};
}

CriterionResult c9_domain_decomposition(const AcceptanceOptions&) {
  cases::Manufactured m;
  m.steady = true;
  const VectorField u = [&](const Vec2& x, double t) { return m.velocity(x, t); };
  std::vector<double> single_err, diff, defect;
  const int ns[3] = {8, 16, 32}, np[3] = {5, 10, 20};
  for (int i = 0; i < 3; ++i) {
    Simulation a(cases::manufactured_box(ns[i], m, 1.0, 1));
    a.step();
    Simulation b(cases::manufactured_patch(ns[i], np[i], m));
    const StepReport rb = b.step();
    single_err.push_back(fluid_error(a.geometry().cfgs[0], a.fluid()[0], u, {}, 0.0).velocity_l2());
    const auto& ca = a.geometry().cfgs[0];
    double d2 = 0.0;
    for (std::size_t f = 0; f < b.geometry().cfgs.size(); ++f) {
      const auto& cb = b.geometry().cfgs[f];
      for (int e = 0; e < cb.mesh.num_elements(); ++e) {
        if (!cb.active[e] || cb.element_class[e] == ElementClass::Outside) continue;
        const QuadratureRule rule = element_volume_rule(cb, e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const Vec2& x = rule.points[q];
          const int ea = ca.mesh.locate(x, 1e-12);
          const Vec2 du = evaluate_fluid(cb, b.fluid()[f], e, x).u - evaluate_fluid(ca, a.fluid()[0], ea, x).u;
          d2 += rule.weights[q] * du.squaredNorm();
        }
      }
    }
    diff.push_back(std::sqrt(d2));
    defect.push_back(rb.ff_mass_defect);
  }
  bool agree = true;
  for (int i = 0; i < 3; ++i) agree = agree && diff[i] <= 2.0 * single_err[i];
  const auto r = rates(defect);
  return {9, "fluid-fluid-decomposition", agree && min_of(r) >= 1.0,
          "single-mesh error " + list(single_err) + ", overlap difference " + list(diff) + ", mass defect " +
              list(defect) + " rates " + list(r)};
}

CriterionResult c10_newton(const AcceptanceOptions& opt) {
  Simulation sim(cases::micro_flap());
  sim.run(4);
  const CoupledAssembler assembler(sim.problem(), sim.solid_operator());
  std::vector<Eigen::VectorXd> scaling;
  for (const auto& f : sim.fluid()) scaling.push_back(f.U);
  const Eigen::VectorXd x = sim.pack();
  const SparseMatrix J = assembler.assemble(sim.geometry(), sim.layout(), x, scaling, sim.last_context()).builder.matrix();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double fd_err = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::VectorXd dir(x.size());
    for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = dist(rng);
    dir.tail(sim.layout().solid_dofs) *= 1e-3;
    const double eps = 1e-6;
    const auto rp = assembler.assemble(sim.geometry(), sim.layout(), x + eps * dir, scaling, sim.last_context());
    const auto rm = assembler.assemble(sim.geometry(), sim.layout(), x - eps * dir, scaling, sim.last_context());
    const Eigen::VectorXd fd = (rp.builder.residual() - rm.builder.residual()) / (2 * eps);
    const Eigen::VectorXd an = J * dir;
    fd_err = std::max(fd_err, (fd - an).norm() / an.norm());
  }

  Simulation run(cases::micro_flap());
  int max_iter = 0, cycles = 0;
  double max_res = 0.0, max_contraction = 0.0;
  std::string failure;
  try {
    for (const auto& r : run.run(20)) {
      max_iter = std::max(max_iter, r.newton_iterations);
      cycles += r.cycles;
      max_res = std::max(max_res, r.final_residual);
      const auto& h = r.residual_history;
      if (h.size() >= 3) max_contraction = std::max(max_contraction, h[h.size() - 1] / h[h.size() - 2]);
    }
  } catch (const std::exception& e) {
    failure = e.what();
  }
  const int c_max = run.problem().driver.max_cycles;
  const bool ok = failure.empty() && fd_err < 1e-6 * opt.tol_scale && max_iter <= 10 &&
                  max_res < 1e-8 * opt.tol_scale && cycles <= c_max && max_contraction < 0.5;
  return {10, "coupled-newton", ok,
          failure.empty() ? "Jacobian vs FD " + sci(fd_err) + ", max iterations " + std::to_string(max_iter) +
                                ", max final residual " + sci(max_res) + ", cycles " + std::to_string(cycles) +
                                ", worst final contraction " + sci(max_contraction)
                          : "failed: " + failure};
}

struct FlapRun {
  std::vector<StepReport> reports;
  std::string failure;
  double seconds = 0.0;
};

const FlapRun& flap_run(int steps) {
  static std::map<int, FlapRun> cache;
  auto it = cache.find(steps);
  if (it != cache.end()) return it->second;
  FlapRun fr;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Simulation sim(cases::flap_channel(30, 13));
    fr.reports = sim.run(steps);
  } catch (const std::exception& e) {
    fr.failure = e.what();
  }
  fr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return cache.emplace(steps, std::move(fr)).first->second;
}

CriterionResult c11_flap(const AcceptanceOptions& opt) {
  const FlapRun& fr = flap_run(opt.flap_steps);
  if (!fr.failure.empty()) return {11, "flap-channel", false, "failed: " + fr.failure};
  double max_d = 0.0, max_d1 = 0.0, max_d2 = 0.0;
  int max_iter = 0, cycles = 0;
  std::vector<Vec2> d;
  for (const auto& r : fr.reports) {
    d.push_back(r.probe_displacement.at(0));
    max_iter = std::max(max_iter, r.newton_iterations);
    cycles += r.cycles;
  }
  bool finite = true;
  for (std::size_t i = 0; i < d.size(); ++i) {
    finite = finite && std::isfinite(d[i].x()) && std::isfinite(d[i].y());
    max_d = std::max(max_d, d[i].norm());
    if (i >= 1) max_d1 = std::max(max_d1, (d[i] - d[i - 1]).norm());
    if (i >= 2) max_d2 = std::max(max_d2, (d[i] - 2 * d[i - 1] + d[i - 2]).norm());
  }
  // Bounded by the flap length, smooth when second differences stay below the first ones.
  const bool bounded = finite && max_d < 0.35;
  const bool smooth = max_d2 <= 0.25 * max_d1;
  return {11, "flap-channel", bounded && smooth && static_cast<int>(fr.reports.size()) == opt.flap_steps,
          std::to_string(fr.reports.size()) + " steps, max tip displacement " + sci(max_d) + ", max step change " +
              sci(max_d1) + ", max second difference " + sci(max_d2) + ", max iterations " + std::to_string(max_iter) +
              ", cycles " + std::to_string(cycles)};
}

CriterionResult c12_force_balance(const AcceptanceOptions& opt) {
  const FlapRun& fr = flap_run(opt.flap_steps);
  if (!fr.failure.empty()) return {12, "force-balance", false, "flap run failed: " + fr.failure};
  double worst = 0.0;
  for (const auto& r : fr.reports) {
    const double scale = std::max({r.fluid_force.norm(), r.solid_force.norm(), 1e-14});
    worst = std::max(worst, (r.fluid_force + r.solid_force).norm() / scale);
  }
  return {12, "force-balance", !fr.reports.empty() && worst < 1e-10 * opt.tol_scale,
          "max relative imbalance " + sci(worst) + " over " + std::to_string(fr.reports.size()) + " steps"};
}

using Check = std::function<CriterionResult(const AcceptanceOptions&)>;

const std::map<int, Check>& checks() {
  static const std::map<int, Check> m{
      {1, c1_geometry},     {2, c2_jump},       {3, c3_solid_statics}, {4, c4_solid_dynamics},
      {5, c5_fitted_fluid}, {6, c6_unfitted_fluid}, {7, c7_conditioning}, {8, c8_projection},
      {9, c9_domain_decomposition}, {10, c10_newton}, {11, c11_flap}, {12, c12_force_balance}};
  return m;
}

const std::vector<std::pair<std::string, std::vector<int>>>& suites() {
  static const std::vector<std::pair<std::string, std::vector<int>>> s{
      {"quadrature", {1}}, {"jump", {2}},          {"solid", {3, 4}},       {"fluid", {5}},
      {"unfitted", {6}},   {"conditioning", {7}},  {"projection", {8}},     {"dd", {9}},
      {"newton", {10}},    {"flap", {11, 12}},     {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}}};
  return s;
}

}  // namespace

std::vector<std::string> acceptance_suites() {
  std::vector<std::string> out;
  for (const auto& [name, ids] : suites()) out.push_back(name);
  return out;
}

std::vector<int> suite_criteria(const std::string& suite) {
  for (const auto& [name, ids] : suites())
    if (name == suite) return ids;
  throw std::invalid_argument("unknown verification suite '" + suite + "'");
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  const auto it = checks().find(id);
  if (it == checks().end()) throw std::invalid_argument("unknown criterion " + std::to_string(id));
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = it->second(opt);
  } catch (const std::exception& e) {
    r = {id, "criterion-" + std::to_string(id), false, std::string("error: ") + e.what()};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (id == 1 && r.seconds >= 5.0) {
    r.passed = false;
    r.detail += ", runtime over 5 s";
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::string& suite, const AcceptanceOptions& opt) {
  std::vector<CriterionResult> out;
  for (int id : suite_criteria(suite)) out.push_back(run_criterion(id, opt));
  return out;
}

std::string format_result(const CriterionResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof(secs), "%.2f s", r.seconds);
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": " + r.detail + " (" +
         secs + ")";
}

}  // namespace fsi2d
