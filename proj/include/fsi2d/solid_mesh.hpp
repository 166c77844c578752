#pragma once

#include "fsi2d/geometry.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fsi2d {

enum class BoundaryTag { Clamped, Wet, Free };

std::string to_string(BoundaryTag tag);
BoundaryTag boundary_tag_from_string(const std::string& s);

/// Boundary edge n0 -> n1, oriented so the solid lies on its left.
struct BoundarySegment {
  int n0 = -1;
  int n1 = -1;
  BoundaryTag tag = BoundaryTag::Free;
};

/// Boundary-fitted unstructured Q1 mesh in the reference configuration.
struct SolidMesh {
  std::vector<Vec2> X;
  std::vector<std::array<int, 4>> elements;  ///< counterclockwise
  std::vector<BoundarySegment> boundary;

  int num_nodes() const { return static_cast<int>(X.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_dofs() const { return 2 * num_nodes(); }

  /// Orients boundary segments consistently with the elements and checks
  /// positive Jacobians and a single closed boundary loop.
  void validate();

  /// Indices into `boundary`, ordered along the closed loop.
  std::vector<int> boundary_loop() const;
  std::vector<int> clamped_nodes() const;
  double min_element_size() const;
};

/// Current-configuration node position x = X + d.
Vec2 current_position(const SolidMesh& mesh, std::span<const double> d, int node);

/// Closed CCW outline of the deformed solid.
Polygon solid_outline(const SolidMesh& mesh, std::span<const double> d);

/// Piece of the wet boundary in the current configuration.
struct InterfaceSegment {
  Vec2 a, b;
  Vec2 normal;  ///< unit, pointing from the fluid into the solid
  int boundary_index = -1;
  int node0 = -1, node1 = -1;
  double length() const { return (b - a).norm(); }
};

/// Ordered wet segments of the current configuration.
std::vector<InterfaceSegment> extract_interface(const SolidMesh& mesh, std::span<const double> d,
                                                double tol = 1e-12);

SolidMesh read_solid_mesh(std::istream& in);
SolidMesh read_solid_mesh_file(const std::string& path);
void write_solid_mesh(std::ostream& out, const SolidMesh& mesh);

/// Structured nx x ny rectangle; `side_tags` order is left, right, bottom, top.
SolidMesh make_rectangle_solid(const Vec2& lo, const Vec2& hi, int nx, int ny,
                               const std::array<BoundaryTag, 4>& side_tags);

}  // namespace fsi2d
