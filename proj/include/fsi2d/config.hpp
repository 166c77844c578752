#pragma once

#include "fsi2d/driver.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsi2d {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg);
  int line() const { return line_; }

 private:
  int line_;
};

/// Temporal factor g(t) of a boundary profile.
struct TimeCurve {
  enum class Kind { Constant, Ramp, Piecewise };
  Kind kind = Kind::Constant;
  double t_ramp = 1.0;                             ///< Ramp: (1 - cos(pi t / t_ramp)) / 2, then 1
  std::vector<std::pair<double, double>> points;   ///< Piecewise: (t, g), held constant outside

  double operator()(double t) const;
  bool covers(double t0, double t1) const;
  std::string str() const;
  static TimeCurve parse(const std::string& text);
};

/// Velocity profile u(s) g(t), each component a polynomial in the side coordinate s.
struct InletProfile {
  std::vector<double> ux{1.0};  ///< coefficients c_k of s^k
  std::vector<double> uy{0.0};
  TimeCurve curve;

  Vec2 at(double s, double t) const;
};

enum class SideKind { Wall, Inlet, Traction };

struct CaseConfig {
  // [geometry]
  Box domain{Vec2(0, 0), Vec2(1, 1)};
  int cells_x = 8, cells_y = 8;
  std::string solid_mesh;                     ///< file path, resolved against base_dir
  std::optional<Box> solid_box;               ///< structured rectangle solid instead of a file
  int solid_cells_x = 1, solid_cells_y = 1;
  std::array<BoundaryTag, 4> solid_tags{BoundaryTag::Wet, BoundaryTag::Wet, BoundaryTag::Wet, BoundaryTag::Wet};
  bool solid_rigid = false;
  std::optional<Box> patch;                   ///< embedded fluid patch, all sides coupled
  int patch_cells_x = 4, patch_cells_y = 4;

  // [fluid]
  double rho_f = 1.0, mu_f = 0.01;
  Vec2 fluid_body_force = Vec2::Zero();
  bool convection = true;

  // [solid]
  double E = 1.0, nu_s = 0.3, rho_s = 1.0;
  Vec2 solid_body_force = Vec2::Zero();

  // [boundary], sides in Side order
  std::array<SideKind, 4> sides{SideKind::Wall, SideKind::Wall, SideKind::Wall, SideKind::Wall};
  InletProfile inlet;
  std::optional<Vec2> pressure_pin;

  // [solver]
  double t0 = 0.0;
  DriverConfig driver;
  NitscheParams nitsche;
  StabParams stab;

  // [output]
  std::string output_dir = "output";
  int output_stride = 1;
  bool vtk = true;
  std::vector<Vec2> probes;

  std::string base_dir;  ///< directory of the config file, not serialized

  bool has_solid() const { return !solid_mesh.empty() || solid_box.has_value(); }
  double end_time() const { return t0 + driver.steps * driver.dt; }
};

struct ParsedConfig {
  CaseConfig config;
  std::vector<std::string> defaults;  ///< "section.key = value" for every default applied
};

ParsedConfig parse_config(std::istream& in, const std::string& base_dir = "");
ParsedConfig parse_config_file(const std::string& path);
std::string serialize_config(const CaseConfig& c);

/// Assembles the solver problem; reads the solid mesh file when referenced.
Problem build_problem(const CaseConfig& c);

}  // namespace fsi2d
