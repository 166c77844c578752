#pragma once

#include "fsi2d/driver.hpp"

namespace fsi2d::cases {

/// Smooth solenoidal field on the unit square vanishing on its boundary,
/// scaled by (1 + t), with p = (1 + t) cos(pi x) cos(pi y).
struct Manufactured {
  double rho = 1.0;
  double mu = 0.1;
  bool steady = false;  ///< evaluate at fixed t = 0 and drop the time derivative

  Vec2 velocity(const Vec2& x, double t) const;
  double pressure(const Vec2& x, double t) const;
  /// Body force per unit mass for the Navier-Stokes equations.
  Vec2 force(const Vec2& x, double t) const;
};

/// Unit square, walls everywhere, pressure pinned, backward Euler.
Problem manufactured_box(int n, const Manufactured& m, double dt, int steps);

/// Same flow (steady) on a background mesh with an overlapping patch.
Problem manufactured_patch(int n, int n_patch, const Manufactured& m);

/// Channel [0,1]^2 with a rigid wall below y = wall and a no-slip lid, driven by a body force.
struct Poiseuille {
  double wall = 0.5 / 3.14159265358979323846;
  double umax = 1.0;
  double rho = 1.0;
  double mu = 0.1;

  Vec2 velocity(const Vec2& x) const;
};
Problem poiseuille_channel(int n, const Poiseuille& pc);

/// Hydrostatic column with a rigid block; gravity g along -y.
Problem hydrostatic_column(int n, double g);

/// 3 x 3 background mesh with a soft clamped flap in a driven channel.
Problem micro_flap();

/// Two-dimensional flap in a channel with a ramped parabolic inflow.
Problem flap_channel(int n1, int n2);

/// Inlet profile 4 umax y (H - y) / H^2 ramped by (1 - cos(pi t / t_ramp)) / 2.
VectorField ramped_inlet(double H, double umax, double t_ramp);

}  // namespace fsi2d::cases
