#include "fsi2d/cases.hpp"

#include <cmath>
#include <numbers>

namespace fsi2d::cases {

namespace {

constexpr double kPi = std::numbers::pi;

std::array<SideCondition, 4> walls() { return {}; }

SideCondition velocity_side(VectorField f) { return {BcKind::Velocity, std::move(f)}; }

}  // namespace

Vec2 Manufactured::velocity(const Vec2& x, double t) const {
  const double s = steady ? 1.0 : 1.0 + t;
  const double sx = std::sin(kPi * x.x()), sy = std::sin(kPi * x.y());
  return s * Vec2(sx * sx * std::sin(2 * kPi * x.y()), -std::sin(2 * kPi * x.x()) * sy * sy);
}

double Manufactured::pressure(const Vec2& x, double t) const {
  const double s = steady ? 1.0 : 1.0 + t;
  return s * std::cos(kPi * x.x()) * std::cos(kPi * x.y());
}

Vec2 Manufactured::force(const Vec2& x, double t) const {
  const double s = steady ? 1.0 : 1.0 + t;
  const double X = x.x(), Y = x.y();
  const double sx = std::sin(kPi * X), sy = std::sin(kPi * Y);
  const double s2x = std::sin(2 * kPi * X), s2y = std::sin(2 * kPi * Y);
  const double c2x = std::cos(2 * kPi * X), c2y = std::cos(2 * kPi * Y);
  const Vec2 g(sx * sx * s2y, -s2x * sy * sy);
  Mat2 G;  // G(i, j) = d g_i / d x_j
  G << kPi * s2x * s2y, 2 * kPi * sx * sx * c2y, -2 * kPi * c2x * sy * sy, -kPi * s2x * s2y;
  const Vec2 lap(2 * kPi * kPi * c2x * s2y - 4 * kPi * kPi * sx * sx * s2y,
                 4 * kPi * kPi * s2x * sy * sy - 2 * kPi * kPi * s2x * c2y);
  const Vec2 gp(-s * kPi * std::sin(kPi * X) * std::cos(kPi * Y), -s * kPi * std::cos(kPi * X) * std::sin(kPi * Y));
  const Vec2 dudt = steady ? Vec2::Zero() : g;
  return dudt + s * s * (G * g) - (mu / rho) * s * lap + gp / rho;
}

Problem manufactured_box(int n, const Manufactured& m, double dt, int steps) {
  Problem pb;
  pb.fields.push_back({StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), n, n), walls()});
  pb.fluid.rho = m.rho;
  pb.fluid.mu = m.mu;
  pb.fluid.body_force = [m](const Vec2& x, double t) { return m.force(x, t); };
  pb.initial_velocity = [m](const Vec2& x, double t) { return m.velocity(x, t); };
  pb.pressure_pin = Vec2(0.5, 0.5);
  pb.driver.dt = dt;
  pb.driver.steps = steps;
  pb.driver.steady = m.steady;
  return pb;
}

Problem manufactured_patch(int n, int n_patch, const Manufactured& m) {
  Problem pb = manufactured_box(n, m, 1.0, 1);
  std::array<SideCondition, 4> coupled;
  for (auto& s : coupled) s.kind = BcKind::Coupled;
  pb.fields.push_back({StructuredBackgroundMesh::from_box(Vec2(0.29, 0.31), Vec2(0.67, 0.71), n_patch, n_patch), coupled});
  pb.pressure_pin = Vec2(0.1, 0.1);
  return pb;
}

Vec2 Poiseuille::velocity(const Vec2& x) const {
  const double H = 1.0 - wall;
  return {4.0 * umax * (x.y() - wall) * (1.0 - x.y()) / (H * H), 0.0};
}

Problem poiseuille_channel(int n, const Poiseuille& pc) {
  Problem pb;
  auto sides = walls();
  const auto inflow = [pc](const Vec2& x, double) { return pc.velocity(x); };
  sides[static_cast<int>(Side::Left)] = velocity_side(inflow);
  sides[static_cast<int>(Side::Right)] = velocity_side(inflow);
  sides[static_cast<int>(Side::Bottom)].kind = BcKind::Traction;
  pb.fields.push_back({StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), n, n), sides});
  SolidSpec s;
  s.mesh = make_rectangle_solid(Vec2(0, 0), Vec2(1, pc.wall), 4, 1,
                                {BoundaryTag::Free, BoundaryTag::Free, BoundaryTag::Clamped, BoundaryTag::Wet});
  s.rigid = true;
  pb.solid = s;
  pb.fluid.rho = pc.rho;
  pb.fluid.mu = pc.mu;
  const double H = 1.0 - pc.wall;
  const double fx = 8.0 * pc.mu * pc.umax / (pc.rho * H * H);
  pb.fluid.body_force = [fx](const Vec2&, double) { return Vec2(fx, 0.0); };
  pb.pressure_pin = Vec2(0.5, 0.9);
  pb.driver.steady = true;
  pb.driver.steps = 1;
  return pb;
}

Problem hydrostatic_column(int n, double g) {
  Problem pb;
  pb.fields.push_back({StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), n, n), walls()});
  SolidSpec s;
  s.mesh = make_rectangle_solid(Vec2(0.31, 0.22), Vec2(0.69, 0.53), 3, 2,
                                {BoundaryTag::Wet, BoundaryTag::Wet, BoundaryTag::Wet, BoundaryTag::Wet});
  s.rigid = true;
  pb.solid = s;
  pb.fluid.body_force = [g](const Vec2&, double) { return Vec2(0.0, -g); };
  pb.pressure_pin = Vec2(0.0, 0.0);
  pb.driver.steady = true;
  return pb;
}

VectorField ramped_inlet(double H, double umax, double t_ramp) {
  return [=](const Vec2& x, double t) {
    const double ramp = t >= t_ramp ? 1.0 : 0.5 * (1.0 - std::cos(kPi * t / t_ramp));
    return Vec2(4.0 * umax * x.y() * (H - x.y()) / (H * H) * ramp, 0.0);
  };
}

Problem micro_flap() {
  Problem pb;
  auto sides = walls();
  sides[static_cast<int>(Side::Left)] = velocity_side(ramped_inlet(1.0, 0.5, 0.2));
  sides[static_cast<int>(Side::Right)].kind = BcKind::Traction;
  pb.fields.push_back({StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 3, 3), sides});
  SolidSpec s;
  s.mesh = make_rectangle_solid(Vec2(0.3, 0.0), Vec2(0.45, 0.5), 1, 3,
                                {BoundaryTag::Wet, BoundaryTag::Wet, BoundaryTag::Clamped, BoundaryTag::Wet});
  s.material = {500.0, 0.3, 10.0};
  pb.solid = s;
  pb.fluid.rho = 1.0;
  pb.fluid.mu = 0.05;
  pb.driver.dt = 0.05;
  pb.driver.steps = 20;
  pb.probes = {Vec2(0.375, 0.5)};
  return pb;
}

Problem flap_channel(int n1, int n2) {
  const double L = 1.8, H = 0.6;
  Problem pb;
  auto sides = walls();
  sides[static_cast<int>(Side::Left)] = velocity_side(ramped_inlet(H, 1.0, 2.0));
  sides[static_cast<int>(Side::Right)].kind = BcKind::Traction;
  pb.fields.push_back({StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(L, H), n1, n2), sides});
  SolidSpec s;
  s.mesh = make_rectangle_solid(Vec2(0.49, 0.0), Vec2(0.56, 0.35), 2, 10,
                                {BoundaryTag::Wet, BoundaryTag::Wet, BoundaryTag::Clamped, BoundaryTag::Wet});
  s.material = {500.0, 0.4, 250.0};
  pb.solid = s;
  pb.fluid.rho = 1.0;
  pb.fluid.mu = 0.01;
  pb.nitsche.gamma = 10.0;
  pb.driver.dt = 0.01;
  pb.driver.steps = 500;
  pb.driver.theta = 1.0;
  pb.probes = {Vec2(0.525, 0.35)};
  return pb;
}

}  // namespace fsi2d::cases
