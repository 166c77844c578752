#include "fsi2d/config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace fsi2d {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> entries;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::string fmt(const Vec2& v) { return fmt(v.x()) + " " + fmt(v.y()); }
std::string fmt(const Box& b) { return fmt(b.lo) + " " + fmt(b.hi); }
std::string fmt_bool(bool b) { return b ? "true" : "false"; }

std::vector<double> numbers(const std::string& s) {
  std::vector<double> out;
  std::istringstream ss(s);
  std::string tok;
  while (ss >> tok) {
    double v = 0.0;
    const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) throw std::invalid_argument("'" + tok + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::vector<double> fixed_numbers(const std::string& s, std::size_t n) {
  auto v = numbers(s);
  if (v.size() != n) throw std::invalid_argument("expected " + std::to_string(n) + " numbers");
  return v;
}

const char* side_name(int s) {
  static const char* names[4] = {"left", "right", "bottom", "top"};
  return names[s];
}

std::string to_string(SideKind k) {
  switch (k) {
    case SideKind::Wall: return "wall";
    case SideKind::Inlet: return "inlet";
    case SideKind::Traction: return "traction";
  }
  return "wall";
}

SideKind side_kind(const std::string& s) {
  if (s == "wall") return SideKind::Wall;
  if (s == "inlet") return SideKind::Inlet;
  if (s == "traction") return SideKind::Traction;
  throw std::invalid_argument("side must be wall, inlet or traction");
}

// Typed access to one section; records defaults and reports errors by line.
class Reader {
 public:
  Reader(std::map<std::string, Section>& sections, std::vector<std::string>& defaults)
      : sections_(sections), defaults_(defaults) {}

  template <class T>
  void get(const std::string& sec, const std::string& key, T& target, const std::function<T(const std::string&)>& parse,
           const std::function<std::string(const T&)>& show, const std::function<void(const T&)>& check = {}) {
    auto sit = sections_.find(sec);
    Entry* e = nullptr;
    if (sit != sections_.end()) {
      auto it = sit->second.entries.find(key);
      if (it != sit->second.entries.end()) e = &it->second;
    }
    if (!e) {
      defaults_.push_back(sec + "." + key + " = " + show(target));
      return;
    }
    e->used = true;
    try {
      T v = parse(e->value);
      if (check) check(v);
      target = std::move(v);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ConfigError(e->line, sec + "." + key + ": " + ex.what());
    }
  }

  void number(const std::string& sec, const std::string& key, double& t, const std::function<void(double)>& check = {}) {
    get<double>(
        sec, key, t, [](const std::string& s) { return fixed_numbers(s, 1)[0]; }, [](const double& v) { return fmt(v); },
        check ? std::function<void(const double&)>([check](const double& v) { check(v); })
              : std::function<void(const double&)>{});
  }

  void integer(const std::string& sec, const std::string& key, int& t, int min_value) {
    get<int>(
        sec, key, t,
        [](const std::string& s) {
          int v = 0;
          const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
          if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::invalid_argument("expected an integer");
          return v;
        },
        [](const int& v) { return std::to_string(v); },
        [min_value](const int& v) {
          if (v < min_value) throw std::invalid_argument("must be at least " + std::to_string(min_value));
        });
  }

  void boolean(const std::string& sec, const std::string& key, bool& t) {
    get<bool>(
        sec, key, t,
        [](const std::string& s) {
          if (s == "true" || s == "yes" || s == "1") return true;
          if (s == "false" || s == "no" || s == "0") return false;
          throw std::invalid_argument("expected true or false");
        },
        [](const bool& v) { return fmt_bool(v); });
  }

  void vec(const std::string& sec, const std::string& key, Vec2& t) {
    get<Vec2>(
        sec, key, t,
        [](const std::string& s) {
          const auto v = fixed_numbers(s, 2);
          return Vec2(v[0], v[1]);
        },
        [](const Vec2& v) { return fmt(v); });
  }

  void text(const std::string& sec, const std::string& key, std::string& t) {
    get<std::string>(
        sec, key, t, [](const std::string& s) { return s; }, [](const std::string& v) { return v; });
  }

  bool has(const std::string& sec, const std::string& key) const {
    auto sit = sections_.find(sec);
    return sit != sections_.end() && sit->second.entries.count(key);
  }

  int line_of(const std::string& sec, const std::string& key) const {
    auto sit = sections_.find(sec);
    if (sit == sections_.end()) return 0;
    auto it = sit->second.entries.find(key);
    return it == sit->second.entries.end() ? sit->second.line : it->second.line;
  }

 private:
  std::map<std::string, Section>& sections_;
  std::vector<std::string>& defaults_;
};

void positive(double v) {
  if (!(v > 0.0)) throw std::invalid_argument("must be positive");
}

Box parse_box(const std::string& s) {
  const auto v = fixed_numbers(s, 4);
  Box b{Vec2(v[0], v[1]), Vec2(v[2], v[3])};
  if (!(b.hi.x() > b.lo.x() && b.hi.y() > b.lo.y())) throw std::invalid_argument("box must have positive extent");
  return b;
}

std::string show_optional_box(const std::optional<Box>& b) { return b ? fmt(*b) : "none"; }

std::optional<Box> parse_optional_box(const std::string& s) {
  if (s == "none") return std::nullopt;
  return parse_box(s);
}

std::string show_probes(const std::vector<Vec2>& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? "; " : "") + fmt(p[i]);
  return out.empty() ? "none" : out;
}

std::vector<Vec2> parse_probes(const std::string& s) {
  std::vector<Vec2> out;
  if (s == "none") return out;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto v = fixed_numbers(item, 2);
    out.emplace_back(v[0], v[1]);
  }
  return out;
}

std::string show_poly(const std::vector<double>& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? " " : "") + fmt(c[i]);
  return out;
}

std::vector<double> parse_poly(const std::string& s) {
  auto v = numbers(s);
  if (v.empty()) throw std::invalid_argument("expected at least one coefficient");
  return v;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& msg)
    : std::runtime_error("config line " + std::to_string(line) + ": " + msg), line_(line) {}

double TimeCurve::operator()(double t) const {
  switch (kind) {
    case Kind::Constant: return 1.0;
    case Kind::Ramp: return t >= t_ramp ? 1.0 : (t <= 0.0 ? 0.0 : 0.5 * (1.0 - std::cos(kPi * t / t_ramp)));
    case Kind::Piecewise: {
      if (t <= points.front().first) return points.front().second;
      for (std::size_t i = 1; i < points.size(); ++i)
        if (t <= points[i].first) {
          const auto& [ta, ga] = points[i - 1];
          const auto& [tb, gb] = points[i];
          return ga + (gb - ga) * (t - ta) / (tb - ta);
        }
      return points.back().second;
    }
  }
  return 1.0;
}

bool TimeCurve::covers(double t0, double t1) const {
  if (kind != Kind::Piecewise) return true;
  return points.front().first <= t0 + 1e-12 && points.back().first >= t1 - 1e-12;
}

std::string TimeCurve::str() const {
  switch (kind) {
    case Kind::Constant: return "constant";
    case Kind::Ramp: return "ramp " + fmt(t_ramp);
    case Kind::Piecewise: {
      std::string s = "pwl";
      for (const auto& [t, g] : points) s += " " + fmt(t) + " " + fmt(g);
      return s;
    }
  }
  return "constant";
}

TimeCurve TimeCurve::parse(const std::string& text) {
  std::istringstream ss(text);
  std::string kind;
  ss >> kind;
  std::string rest;
  std::getline(ss, rest);
  TimeCurve c;
  if (kind == "constant") {
    if (!numbers(rest).empty()) throw std::invalid_argument("constant curve takes no arguments");
  } else if (kind == "ramp") {
    c.kind = Kind::Ramp;
    c.t_ramp = fixed_numbers(rest, 1)[0];
    if (!(c.t_ramp > 0.0)) throw std::invalid_argument("ramp time must be positive");
  } else if (kind == "pwl") {
    c.kind = Kind::Piecewise;
    const auto v = numbers(rest);
    if (v.size() < 2 || v.size() % 2) throw std::invalid_argument("pwl expects pairs 't g'");
    for (std::size_t i = 0; i < v.size(); i += 2) {
      if (i > 0 && !(v[i] > v[i - 2])) throw std::invalid_argument("pwl times must increase");
      c.points.emplace_back(v[i], v[i + 1]);
    }
  } else {
    throw std::invalid_argument("time curve must be constant, ramp or pwl");
  }
  return c;
}

Vec2 InletProfile::at(double s, double t) const {
  auto poly = [s](const std::vector<double>& c) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
    return v;
  };
  return curve(t) * Vec2(poly(ux), poly(uy));
}

ParsedConfig parse_config(std::istream& in, const std::string& base_dir) {
  std::map<std::string, Section> sections;
  std::string line;
  int lineno = 0;
  Section* cur = nullptr;
  std::string cur_name;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(lineno, "malformed section header");
      cur_name = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"geometry", "fluid", "solid", "boundary", "solver", "output"};
      if (std::find(std::begin(known), std::end(known), cur_name) == std::end(known))
        throw ConfigError(lineno, "unknown section [" + cur_name + "]");
      if (sections.count(cur_name)) throw ConfigError(lineno, "duplicate section [" + cur_name + "]");
      cur = &sections[cur_name];
      cur->line = lineno;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value'");
    if (!cur) throw ConfigError(lineno, "key outside of a section");
    const std::string key = trim(line.substr(0, eq));
    if (cur->entries.count(key)) throw ConfigError(lineno, "duplicate key '" + key + "'");
    cur->entries[key] = {trim(line.substr(eq + 1)), lineno, false};
  }
  for (const char* req : {"geometry", "solver"})
    if (!sections.count(req)) throw ConfigError(lineno, std::string("missing section [") + req + "]");

  ParsedConfig out;
  CaseConfig& c = out.config;
  c.base_dir = base_dir;
  Reader r(sections, out.defaults);

  // [geometry]
  r.get<Box>("geometry", "domain", c.domain, parse_box, [](const Box& b) { return fmt(b); });
  r.integer("geometry", "cells_x", c.cells_x, 1);
  r.integer("geometry", "cells_y", c.cells_y, 1);
  r.text("geometry", "solid_mesh", c.solid_mesh);
  r.get<std::optional<Box>>("geometry", "solid_box", c.solid_box, parse_optional_box, show_optional_box);
  r.integer("geometry", "solid_cells_x", c.solid_cells_x, 1);
  r.integer("geometry", "solid_cells_y", c.solid_cells_y, 1);
  r.get<std::array<BoundaryTag, 4>>(
      "geometry", "solid_tags", c.solid_tags,
      [](const std::string& s) {
        std::istringstream ss(s);
        std::array<BoundaryTag, 4> t;
        std::string w;
        for (auto& x : t) {
          if (!(ss >> w)) throw std::invalid_argument("expected four tags (left right bottom top)");
          x = boundary_tag_from_string(w);
        }
        if (ss >> w) throw std::invalid_argument("expected four tags (left right bottom top)");
        return t;
      },
      [](const std::array<BoundaryTag, 4>& t) {
        return to_string(t[0]) + " " + to_string(t[1]) + " " + to_string(t[2]) + " " + to_string(t[3]);
      });
  r.boolean("geometry", "solid_rigid", c.solid_rigid);
  r.get<std::optional<Box>>("geometry", "patch", c.patch, parse_optional_box, show_optional_box);
  r.integer("geometry", "patch_cells_x", c.patch_cells_x, 1);
  r.integer("geometry", "patch_cells_y", c.patch_cells_y, 1);
  if (!c.solid_mesh.empty() && c.solid_box)
    throw ConfigError(r.line_of("geometry", "solid_box"), "geometry: solid_mesh and solid_box are exclusive");
  if (!c.solid_mesh.empty()) {
    std::filesystem::path p(c.solid_mesh);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    if (!std::filesystem::exists(p))
      throw ConfigError(r.line_of("geometry", "solid_mesh"), "geometry.solid_mesh: file not found '" + p.string() + "'");
  }
  if (c.patch && !(c.domain.contains(c.patch->lo) && c.domain.contains(c.patch->hi)))
    throw ConfigError(r.line_of("geometry", "patch"), "geometry.patch: must lie inside the domain");

  // [fluid]
  r.number("fluid", "rho", c.rho_f, positive);
  r.number("fluid", "mu", c.mu_f, positive);
  r.vec("fluid", "body_force", c.fluid_body_force);
  r.boolean("fluid", "convection", c.convection);

  // [solid]
  if (c.has_solid() && !c.solid_rigid && !sections.count("solid"))
    throw ConfigError(lineno, "missing section [solid] for a deformable solid");
  r.number("solid", "E", c.E, positive);
  r.number("solid", "nu", c.nu_s, [](double v) {
    if (!(v > -1.0 && v < 0.5)) throw std::invalid_argument("must lie in the open interval (-1, 0.5)");
  });
  r.number("solid", "rho", c.rho_s, positive);
  r.vec("solid", "body_force", c.solid_body_force);

  // [boundary]
  for (int s = 0; s < 4; ++s)
    r.get<SideKind>("boundary", side_name(s), c.sides[s], side_kind, [](const SideKind& k) { return to_string(k); });
  r.get<std::vector<double>>("boundary", "inlet_ux", c.inlet.ux, parse_poly, show_poly);
  r.get<std::vector<double>>("boundary", "inlet_uy", c.inlet.uy, parse_poly, show_poly);
  r.get<TimeCurve>("boundary", "inlet_curve", c.inlet.curve, TimeCurve::parse, [](const TimeCurve& t) { return t.str(); });
  r.get<std::optional<Vec2>>(
      "boundary", "pressure_pin", c.pressure_pin,
      [](const std::string& s) -> std::optional<Vec2> {
        if (s == "auto") return std::nullopt;
        const auto v = fixed_numbers(s, 2);
        return Vec2(v[0], v[1]);
      },
      [](const std::optional<Vec2>& p) { return p ? fmt(*p) : std::string("auto"); });

  // [solver]
  DriverConfig& d = c.driver;
  r.number("solver", "dt", d.dt, positive);
  r.integer("solver", "steps", d.steps, 0);
  r.number("solver", "t0", c.t0);
  auto unit_interval = [](double v) {
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("must lie in (0, 1]");
  };
  r.number("solver", "theta", d.theta, unit_interval);
  r.number("solver", "theta_gamma", d.theta_gamma, unit_interval);
  r.number("solver", "rho_inf", d.rho_inf, [](double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("must lie in [0, 1]");
  });
  r.number("solver", "tol", d.tol, positive);
  r.integer("solver", "max_newton", d.max_newton, 1);
  r.integer("solver", "max_cycles", d.max_cycles, 1);
  r.boolean("solver", "freeze", d.freeze);
  r.integer("solver", "freeze_after", d.freeze_after, 1);
  r.get<Predictor>(
      "solver", "predictor", d.predictor,
      [](const std::string& s) {
        if (s == "constant") return Predictor::Constant;
        if (s == "velocity") return Predictor::Velocity;
        throw std::invalid_argument("predictor must be constant or velocity");
      },
      [](const Predictor& p) { return std::string(p == Predictor::Constant ? "constant" : "velocity"); });
  r.boolean("solver", "steady", d.steady);
  r.integer("solver", "max_halvings", d.max_halvings, 0);
  r.text("solver", "matrix_market_dir", d.matrix_market_dir);
  r.number("solver", "gamma", c.nitsche.gamma, positive);
  r.get<int>(
      "solver", "adjoint", c.nitsche.adjoint_sign,
      [](const std::string& s) {
        if (s == "inconsistent") return +1;
        if (s == "consistent") return -1;
        throw std::invalid_argument("adjoint must be inconsistent or consistent");
      },
      [](const int& v) { return std::string(v > 0 ? "inconsistent" : "consistent"); });
  r.number("solver", "trace_constant", c.nitsche.trace_constant, positive);
  r.number("solver", "C_I", c.stab.C_I, positive);
  r.number("solver", "gamma_c", c.stab.gamma_c, positive);
  r.number("solver", "gamma_u", c.stab.gamma_u, positive);
  r.number("solver", "gamma_p", c.stab.gamma_p, positive);
  r.number("solver", "c_u", c.stab.c_u, positive);
  r.number("solver", "c_sigma", c.stab.c_sigma, positive);
  r.boolean("solver", "ghost_penalty", c.stab.ghost_penalty);
  r.boolean("solver", "rbvm", c.stab.rbvm);

  // [output]
  r.text("output", "directory", c.output_dir);
  r.integer("output", "stride", c.output_stride, 1);
  r.boolean("output", "vtk", c.vtk);
  r.get<std::vector<Vec2>>("output", "probes", c.probes, parse_probes, show_probes);

  const bool any_inlet = std::find(c.sides.begin(), c.sides.end(), SideKind::Inlet) != c.sides.end();
  if (any_inlet && !c.inlet.curve.covers(c.t0, c.end_time()))
    throw ConfigError(r.line_of("boundary", "inlet_curve"), "boundary.inlet_curve: does not cover the simulated interval");
  if (!c.has_solid() && !c.probes.empty())
    throw ConfigError(r.line_of("output", "probes"), "output.probes: probes need a solid");

  for (auto& [name, sec] : sections)
    for (auto& [key, e] : sec.entries)
      if (!e.used) throw ConfigError(e.line, "unknown key '" + key + "' in [" + name + "]");
  return out;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  return parse_config(in, std::filesystem::path(path).parent_path().string());
}

std::string serialize_config(const CaseConfig& c) {
  std::ostringstream o;
  const auto& d = c.driver;
  o << "[geometry]\n"
    << "domain = " << fmt(c.domain) << "\n"
    << "cells_x = " << c.cells_x << "\n"
    << "cells_y = " << c.cells_y << "\n";
  if (!c.solid_mesh.empty()) o << "solid_mesh = " << c.solid_mesh << "\n";
  o << "solid_box = " << show_optional_box(c.solid_box) << "\n"
    << "solid_cells_x = " << c.solid_cells_x << "\n"
    << "solid_cells_y = " << c.solid_cells_y << "\n"
    << "solid_tags = " << to_string(c.solid_tags[0]) << " " << to_string(c.solid_tags[1]) << " "
    << to_string(c.solid_tags[2]) << " " << to_string(c.solid_tags[3]) << "\n"
    << "solid_rigid = " << fmt_bool(c.solid_rigid) << "\n"
    << "patch = " << show_optional_box(c.patch) << "\n"
    << "patch_cells_x = " << c.patch_cells_x << "\n"
    << "patch_cells_y = " << c.patch_cells_y << "\n\n";
  o << "[fluid]\n"
    << "rho = " << fmt(c.rho_f) << "\n"
    << "mu = " << fmt(c.mu_f) << "\n"
    << "body_force = " << fmt(c.fluid_body_force) << "\n"
    << "convection = " << fmt_bool(c.convection) << "\n\n";
  o << "[solid]\n"
    << "E = " << fmt(c.E) << "\n"
    << "nu = " << fmt(c.nu_s) << "\n"
    << "rho = " << fmt(c.rho_s) << "\n"
    << "body_force = " << fmt(c.solid_body_force) << "\n\n";
  o << "[boundary]\n";
  for (int s = 0; s < 4; ++s) o << side_name(s) << " = " << to_string(c.sides[s]) << "\n";
  o << "inlet_ux = " << show_poly(c.inlet.ux) << "\n"
    << "inlet_uy = " << show_poly(c.inlet.uy) << "\n"
    << "inlet_curve = " << c.inlet.curve.str() << "\n"
    << "pressure_pin = " << (c.pressure_pin ? fmt(*c.pressure_pin) : std::string("auto")) << "\n\n";
  o << "[solver]\n"
    << "dt = " << fmt(d.dt) << "\n"
    << "steps = " << d.steps << "\n"
    << "t0 = " << fmt(c.t0) << "\n"
    << "theta = " << fmt(d.theta) << "\n"
    << "theta_gamma = " << fmt(d.theta_gamma) << "\n"
    << "rho_inf = " << fmt(d.rho_inf) << "\n"
    << "tol = " << fmt(d.tol) << "\n"
    << "max_newton = " << d.max_newton << "\n"
    << "max_cycles = " << d.max_cycles << "\n"
    << "freeze = " << fmt_bool(d.freeze) << "\n"
    << "freeze_after = " << d.freeze_after << "\n"
    << "predictor = " << (d.predictor == Predictor::Constant ? "constant" : "velocity") << "\n"
    << "steady = " << fmt_bool(d.steady) << "\n"
    << "max_halvings = " << d.max_halvings << "\n";
  if (!d.matrix_market_dir.empty()) o << "matrix_market_dir = " << d.matrix_market_dir << "\n";
  o << "gamma = " << fmt(c.nitsche.gamma) << "\n"
    << "adjoint = " << (c.nitsche.adjoint_sign > 0 ? "inconsistent" : "consistent") << "\n"
    << "trace_constant = " << fmt(c.nitsche.trace_constant) << "\n"
    << "C_I = " << fmt(c.stab.C_I) << "\n"
    << "gamma_c = " << fmt(c.stab.gamma_c) << "\n"
    << "gamma_u = " << fmt(c.stab.gamma_u) << "\n"
    << "gamma_p = " << fmt(c.stab.gamma_p) << "\n"
    << "c_u = " << fmt(c.stab.c_u) << "\n"
    << "c_sigma = " << fmt(c.stab.c_sigma) << "\n"
    << "ghost_penalty = " << fmt_bool(c.stab.ghost_penalty) << "\n"
    << "rbvm = " << fmt_bool(c.stab.rbvm) << "\n\n";
  o << "[output]\n"
    << "directory = " << c.output_dir << "\n"
    << "stride = " << c.output_stride << "\n"
    << "vtk = " << fmt_bool(c.vtk) << "\n"
    << "probes = " << show_probes(c.probes) << "\n";
  return o.str();
}

Problem build_problem(const CaseConfig& c) {
  Problem pb;
  FluidField bg{StructuredBackgroundMesh::from_box(c.domain.lo, c.domain.hi, c.cells_x, c.cells_y), {}};
  const Box dom = c.domain;
  const InletProfile inlet = c.inlet;
  bool traction = false;
  for (int s = 0; s < 4; ++s) {
    auto& sc = bg.sides[s];
    switch (c.sides[s]) {
      case SideKind::Wall: sc.kind = BcKind::Wall; break;
      case SideKind::Traction:
        sc.kind = BcKind::Traction;
        traction = true;
        break;
      case SideKind::Inlet: {
        sc.kind = BcKind::Velocity;
        const bool vertical = s == static_cast<int>(Side::Left) || s == static_cast<int>(Side::Right);
        sc.velocity = [inlet, dom, vertical](const Vec2& x, double t) {
          return inlet.at(vertical ? x.y() - dom.lo.y() : x.x() - dom.lo.x(), t);
        };
        break;
      }
    }
  }
  pb.fields.push_back(std::move(bg));
  if (c.patch) {
    FluidField patch{StructuredBackgroundMesh::from_box(c.patch->lo, c.patch->hi, c.patch_cells_x, c.patch_cells_y), {}};
    for (auto& sc : patch.sides) sc.kind = BcKind::Coupled;
    pb.fields.push_back(std::move(patch));
  }
  if (c.has_solid()) {
    SolidSpec s;
    if (c.solid_box) {
      s.mesh = make_rectangle_solid(c.solid_box->lo, c.solid_box->hi, c.solid_cells_x, c.solid_cells_y, c.solid_tags);
    } else {
      std::filesystem::path p(c.solid_mesh);
      if (p.is_relative() && !c.base_dir.empty()) p = std::filesystem::path(c.base_dir) / p;
      s.mesh = read_solid_mesh_file(p.string());
    }
    s.mesh.validate();
    s.material = {c.E, c.nu_s, c.rho_s};
    s.body_force = c.solid_body_force;
    s.rigid = c.solid_rigid;
    pb.solid = std::move(s);
  }
  pb.fluid.rho = c.rho_f;
  pb.fluid.mu = c.mu_f;
  pb.fluid.convection = c.convection;
  if (c.fluid_body_force.norm() > 0.0) {
    const Vec2 f = c.fluid_body_force;
    pb.fluid.body_force = [f](const Vec2&, double) { return f; };
  }
  pb.stab = c.stab;
  pb.nitsche = c.nitsche;
  pb.driver = c.driver;
  pb.t0 = c.t0;
  pb.probes = c.probes;
  if (c.pressure_pin)
    pb.pressure_pin = c.pressure_pin;
  else if (!traction)
    pb.pressure_pin = c.domain.lo;
  pb.validate();
  return pb;
}

}  // namespace fsi2d
