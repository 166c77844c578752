#pragma once

#include "fsi2d/geometry.hpp"
#include "fsi2d/quadrature.hpp"
#include "fsi2d/structured_mesh.hpp"

#include <cstdint>
#include <vector>

namespace fsi2d {

enum class ElementClass : std::uint8_t { InsideFluid, Cut, Outside };
enum class DofRole : std::uint8_t { Standard, Ghost, Inactive };
enum class CouplingKind : std::uint8_t { FluidSolid, FluidFluid };

/// Piece of the boundary of an excluded region that carries a coupling condition.
struct CutterSegment {
  Vec2 a, b;
  Vec2 normal;  ///< unit, pointing out of the fluid of the field being cut
  CouplingKind kind = CouplingKind::FluidSolid;
  int source = -1;  ///< interface segment index (fluid-solid) or partner field (fluid-fluid)
};

/// Part of the plane removed from a fluid field, plus its coupling boundary.
struct ExcludedRegion {
  std::vector<Polygon> polygons;
  std::vector<CutterSegment> segments;
};

struct CutOptions {
  double snap_tol = 1e-9;          ///< relative to h, for snapping cutter vertices to grid lines
  double outside_tol = 1e-12;      ///< relative fluid area below which an element is outside
  double standard_tol = 1e-10;     ///< relative distance for a node to count as physical
  int ghost_layers = 0;            ///< extra facet layers added around cut elements
  std::vector<char> force_active;  ///< per element; keeps otherwise outside elements active
};

/// Node-indexed DOF roles and a compact numbering of the active nodes.
struct DofMap {
  std::vector<DofRole> role;  ///< per background node
  std::vector<int> index;     ///< per background node, -1 when inactive
  std::vector<int> nodes;     ///< active nodes in compact order

  int size() const { return static_cast<int>(nodes.size()); }
  bool active(int node) const { return index[node] >= 0; }
  bool same_active_set(const DofMap& other) const { return index == other.index; }
  bool operator==(const DofMap& other) const { return role == other.role && index == other.index; }

  static DofMap from_roles(std::vector<DofRole> roles);
};

struct SurfacePiece {
  int element = -1;
  int segment = -1;      ///< index into ExcludedRegion::segments
  QuadratureRule rule;   ///< normal copies the segment normal
  std::vector<double> s; ///< segment parameter in [0,1] per point
};

struct CutConfiguration {
  StructuredBackgroundMesh mesh;
  std::vector<ElementClass> element_class;
  std::vector<char> active;                 ///< per element
  std::vector<std::vector<Polygon>> pieces;  ///< fluid polygons of cut elements
  std::vector<QuadratureRule> volume_rules;  ///< empty for inside and outside elements
  std::vector<double> fluid_area;            ///< per element
  std::vector<int> ghost_facets;             ///< ids into mesh.interior_facets()
  DofMap dofs;
  std::vector<SurfacePiece> surface;
  double snap_tol = 1e-9;

  int num_cut() const;
  int num_active() const;
  double total_fluid_area() const;
  bool element_is_full(int e) const { return element_class[e] == ElementClass::InsideFluid; }
};

/// Moves a point lying within rel_tol*h of a grid line onto that line.
Vec2 snap_to_grid(const Vec2& p, const StructuredBackgroundMesh& mesh, double rel_tol);

/// Fluid part of a rectangle: rect minus the union of `excluded`, hole-free.
std::vector<Polygon> clip_rectangle(const Vec2& lo, const Vec2& hi, const std::vector<Polygon>& excluded);

CutConfiguration classify_and_cut(const StructuredBackgroundMesh& mesh, const ExcludedRegion& region,
                                  const CutOptions& opts = {});

/// Splits cutter segments at the grid lines of `cfg.mesh` (and `extra` when given)
/// and assigns each piece to the active element on its fluid side.
std::vector<SurfacePiece> surface_quadrature(const ExcludedRegion& region, const CutConfiguration& cfg,
                                             const StructuredBackgroundMesh* extra = nullptr,
                                             int points_per_piece = 3);

/// Volume rule of an active element (tensor Gauss for full elements).
QuadratureRule element_volume_rule(const CutConfiguration& cfg, int e);

}  // namespace fsi2d
