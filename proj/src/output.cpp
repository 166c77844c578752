#include "fsi2d/output.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <sstream>

namespace fsi2d {

namespace {

std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

struct Cell {
  std::vector<Vec2> pts;
  int mask = 0;
  int element = -1;
};

std::vector<Cell> fluid_cells(const CutConfiguration& cfg) {
  std::vector<Cell> cells;
  for (int e = 0; e < cfg.mesh.num_elements(); ++e) {
    if (!cfg.active[e]) continue;
    if (cfg.element_class[e] == ElementClass::InsideFluid) {
      cells.push_back({cfg.mesh.element_polygon(e), 0, e});
    } else if (cfg.element_class[e] == ElementClass::Cut) {
      for (const auto& piece : cfg.pieces[e])
        for (const auto& t : triangulate(piece)) cells.push_back({{t.a, t.b, t.c}, 1, e});
    }
  }
  return cells;
}

void header(std::ostream& out, const std::string& title, double time) {
  out << "# vtk DataFile Version 3.0\n" << title << " t=" << num(time) << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
}

std::string stepped(const std::string& dir, const std::string& stem, int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%05d.vtk", step);
  return (std::filesystem::path(dir) / (stem + buf)).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  return f;
}

}  // namespace

void write_fluid_vtk(std::ostream& out, const CutConfiguration& cfg, const FluidVectors& v, double time) {
  const auto cells = fluid_cells(cfg);
  std::size_t npts = 0;
  for (const auto& c : cells) npts += c.pts.size();
  header(out, "fluid", time);
  out << "POINTS " << npts << " double\n";
  for (const auto& c : cells)
    for (const auto& p : c.pts) out << num(p.x()) << ' ' << num(p.y()) << " 0\n";
  out << "CELLS " << cells.size() << ' ' << cells.size() + npts << '\n';
  std::size_t k = 0;
  for (const auto& c : cells) {
    out << c.pts.size();
    for (std::size_t i = 0; i < c.pts.size(); ++i) out << ' ' << k++;
    out << '\n';
  }
  out << "CELL_TYPES " << cells.size() << '\n';
  for (const auto& c : cells) out << (c.pts.size() == 4 ? 9 : 5) << '\n';
  out << "CELL_DATA " << cells.size() << "\nSCALARS mask int 1\nLOOKUP_TABLE default\n";
  for (const auto& c : cells) out << c.mask << '\n';
  std::ostringstream u, p;
  for (const auto& c : cells)
    for (const auto& x : c.pts) {
      const FluidPointValue val = evaluate_fluid(cfg, v, c.element, x);
      u << num(val.u.x()) << ' ' << num(val.u.y()) << " 0\n";
      p << num(val.p) << '\n';
    }
  out << "POINT_DATA " << npts << "\nVECTORS u double\n"
      << u.str() << "SCALARS p double 1\nLOOKUP_TABLE default\n"
      << p.str();
}

double exported_fluid_area(const CutConfiguration& cfg) {
  double a = 0.0;
  for (const auto& c : fluid_cells(cfg)) a += std::abs(signed_area(c.pts));
  return a;
}

void write_solid_vtk(std::ostream& out, const SolidMesh& mesh, const SolidState& s, double time) {
  header(out, "solid", time);
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (int a = 0; a < mesh.num_nodes(); ++a)
    out << num(mesh.X[a].x() + s.D[2 * a]) << ' ' << num(mesh.X[a].y() + s.D[2 * a + 1]) << " 0\n";
  out << "CELLS " << mesh.num_elements() << ' ' << 5 * mesh.num_elements() << '\n';
  for (const auto& e : mesh.elements) out << "4 " << e[0] << ' ' << e[1] << ' ' << e[2] << ' ' << e[3] << '\n';
  out << "CELL_TYPES " << mesh.num_elements() << '\n';
  for (int e = 0; e < mesh.num_elements(); ++e) out << "9\n";
  out << "POINT_DATA " << mesh.num_nodes() << "\nVECTORS d double\n";
  for (int a = 0; a < mesh.num_nodes(); ++a) out << num(s.D[2 * a]) << ' ' << num(s.D[2 * a + 1]) << " 0\n";
  out << "VECTORS u double\n";
  for (int a = 0; a < mesh.num_nodes(); ++a) out << num(s.U[2 * a]) << ' ' << num(s.U[2 * a + 1]) << " 0\n";
}

void write_interface_vtk(std::ostream& out, const std::vector<InterfaceSegment>& iface, double time) {
  header(out, "interface", time);
  out << "POINTS " << 2 * iface.size() << " double\n";
  for (const auto& s : iface) out << num(s.a.x()) << ' ' << num(s.a.y()) << " 0\n" << num(s.b.x()) << ' ' << num(s.b.y()) << " 0\n";
  out << "CELLS " << iface.size() << ' ' << 3 * iface.size() << '\n';
  for (std::size_t i = 0; i < iface.size(); ++i) out << "2 " << 2 * i << ' ' << 2 * i + 1 << '\n';
  out << "CELL_TYPES " << iface.size() << '\n';
  for (std::size_t i = 0; i < iface.size(); ++i) out << "3\n";
}

void write_snapshot(const Simulation& sim, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const int step = sim.step_index();
  const auto& g = sim.geometry();
  for (std::size_t f = 0; f < g.cfgs.size(); ++f) {
    auto out = open_out(stepped(dir, "fluid" + std::to_string(f), step));
    write_fluid_vtk(out, g.cfgs[f], sim.fluid()[f], sim.time());
  }
  if (const auto& s = sim.problem().solid) {
    auto out = open_out(stepped(dir, "solid", step));
    write_solid_vtk(out, s->mesh, sim.solid(), sim.time());
    auto iout = open_out(stepped(dir, "interface", step));
    write_interface_vtk(iout, g.iface, sim.time());
  }
}

CutSummary summarize_cut(const CutConfiguration& c) {
  CutSummary s;
  s.elements = c.mesh.num_elements();
  for (int e = 0; e < s.elements; ++e) {
    if (c.active[e]) ++s.active;
    if (!c.active[e] || c.element_class[e] == ElementClass::Outside)
      ++s.outside;
    else if (c.element_class[e] == ElementClass::InsideFluid)
      ++s.inside;
    else
      ++s.cut;
  }
  s.ghost_facets = static_cast<int>(c.ghost_facets.size());
  for (int k = 0; k < c.dofs.size(); ++k) (c.dofs.role[c.dofs.nodes[k]] == DofRole::Standard ? s.standard_dofs : s.ghost_dofs)++;
  s.fluid_area = c.total_fluid_area();
  return s;
}

void write_cut_summary(std::ostream& out, const Geometry& g, double time) {
  out << "time " << num(time) << '\n';
  for (std::size_t f = 0; f < g.cfgs.size(); ++f) {
    const CutSummary s = summarize_cut(g.cfgs[f]);
    out << "field " << f << '\n'
        << "  elements " << s.elements << '\n'
        << "  inside " << s.inside << '\n'
        << "  cut " << s.cut << '\n'
        << "  outside " << s.outside << '\n'
        << "  active " << s.active << '\n'
        << "  ghost_facets " << s.ghost_facets << '\n'
        << "  standard_dofs " << s.standard_dofs << '\n'
        << "  ghost_dofs " << s.ghost_dofs << '\n'
        << "  fluid_area " << num(s.fluid_area) << '\n';
  }
  if (!g.iface.empty()) {
    double len = 0.0;
    for (const auto& seg : g.iface) len += seg.length();
    out << "interface_segments " << g.iface.size() << "\ninterface_length " << num(len) << '\n';
  }
}

DiagnosticsTable::DiagnosticsTable(const std::string& path, std::size_t num_probes, bool append) {
  const bool fresh = !append || !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  out_.open(path, append ? std::ios::app : std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot write '" + path + "'");
  if (fresh) out_ << header(num_probes) << '\n' << std::flush;
}

void DiagnosticsTable::add(const StepReport& r) { out_ << row(r) << '\n' << std::flush; }

std::string DiagnosticsTable::header(std::size_t num_probes) {
  std::string h = "step,time,newton_iterations,cycles,frozen,final_residual,jump_l2,fluid_fx,fluid_fy,solid_fx,solid_fy,ff_mass_defect";
  for (std::size_t i = 0; i < num_probes; ++i)
    h += ",probe" + std::to_string(i) + "_dx,probe" + std::to_string(i) + "_dy";
  return h;
}

std::string DiagnosticsTable::row(const StepReport& r) {
  std::string s = std::to_string(r.step) + "," + num(r.time) + "," + std::to_string(r.newton_iterations) + "," +
                  std::to_string(r.cycles) + "," + (r.frozen ? "1" : "0") + "," + num(r.final_residual) + "," +
                  num(r.jump_l2) + "," + num(r.fluid_force.x()) + "," + num(r.fluid_force.y()) + "," +
                  num(r.solid_force.x()) + "," + num(r.solid_force.y()) + "," + num(r.ff_mass_defect);
  for (const auto& p : r.probe_displacement) s += "," + num(p.x()) + "," + num(p.y());
  return s;
}

}  // namespace fsi2d
