#pragma once

#include "fsi2d/driver.hpp"

#include <fstream>
#include <iosfwd>
#include <string>

namespace fsi2d {

/// Fluid part of one field as legacy VTK: full elements as quads, cut elements
/// as triangulated fluid pieces. Cell data "mask" is 0 inside and 1 cut.
void write_fluid_vtk(std::ostream& out, const CutConfiguration& cfg, const FluidVectors& v, double time);

/// Deformed solid with point data d and u.
void write_solid_vtk(std::ostream& out, const SolidMesh& mesh, const SolidState& s, double time);

/// Wet interface as a polyline in the current configuration.
void write_interface_vtk(std::ostream& out, const std::vector<InterfaceSegment>& iface, double time);

/// Total area of the cells write_fluid_vtk emits.
double exported_fluid_area(const CutConfiguration& cfg);

/// Writes fluid<f>_<step>.vtk, solid_<step>.vtk and interface_<step>.vtk into dir.
void write_snapshot(const Simulation& sim, const std::string& dir);

/// Element and DOF counts of one cut configuration.
struct CutSummary {
  int elements = 0, inside = 0, cut = 0, outside = 0, active = 0;
  int ghost_facets = 0, standard_dofs = 0, ghost_dofs = 0;
  double fluid_area = 0.0;
};
CutSummary summarize_cut(const CutConfiguration& cfg);
/// "key value" lines of every field plus the interface.
void write_cut_summary(std::ostream& out, const Geometry& g, double time);

/// Append-only comma-separated diagnostics, one row per step.
class DiagnosticsTable {
 public:
  DiagnosticsTable(const std::string& path, std::size_t num_probes, bool append);
  void add(const StepReport& r);

  static std::string header(std::size_t num_probes);
  static std::string row(const StepReport& r);

 private:
  std::ofstream out_;
};

}  // namespace fsi2d
