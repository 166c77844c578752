#include "fsi2d/solid_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace fsi2d {

std::string to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Clamped: return "clamped";
    case BoundaryTag::Wet: return "wet";
    case BoundaryTag::Free: return "free";
  }
  return "free";
}

BoundaryTag boundary_tag_from_string(const std::string& s) {
  if (s == "clamped" || s == "dirichlet") return BoundaryTag::Clamped;
  if (s == "wet" || s == "interface") return BoundaryTag::Wet;
  if (s == "free") return BoundaryTag::Free;
  throw std::invalid_argument("unknown boundary tag '" + s + "'");
}

namespace {

double q1_jacobian_det(const std::array<Vec2, 4>& x, double s, double t) {
  // Reference square [0,1]^2.
  const Vec2 dxs = (1 - t) * (x[1] - x[0]) + t * (x[2] - x[3]);
  const Vec2 dxt = (1 - s) * (x[3] - x[0]) + s * (x[2] - x[1]);
  return cross(dxs, dxt);
}

}  // namespace

void SolidMesh::validate() {
  const int nn = num_nodes();
  if (elements.empty()) throw GeometryError("solid mesh has no elements");
  std::map<std::pair<int, int>, int> directed;
  for (int e = 0; e < num_elements(); ++e) {
    std::array<Vec2, 4> x;
    for (int k = 0; k < 4; ++k) {
      const int n = elements[e][k];
      if (n < 0 || n >= nn) throw GeometryError("solid element " + std::to_string(e) + " references missing node");
      x[k] = X[n];
    }
    for (double s : {0.0, 0.5, 1.0})
      for (double t : {0.0, 0.5, 1.0})
        if (q1_jacobian_det(x, s, t) <= 0.0)
          throw GeometryError("solid element " + std::to_string(e) + " has non-positive Jacobian");
    for (int k = 0; k < 4; ++k) ++directed[{elements[e][k], elements[e][(k + 1) % 4]}];
  }
  for (auto& seg : boundary) {
    if (seg.n0 < 0 || seg.n0 >= nn || seg.n1 < 0 || seg.n1 >= nn)
      throw GeometryError("boundary segment references missing node");
    const bool fwd = directed.count({seg.n0, seg.n1}) > 0;
    const bool bwd = directed.count({seg.n1, seg.n0}) > 0;
    if (fwd && bwd) throw GeometryError("boundary segment lies on an interior edge");
    if (!fwd && !bwd) throw GeometryError("boundary segment is not an element edge");
    if (bwd) std::swap(seg.n0, seg.n1);
  }
  // Every boundary edge of the element patch must be listed.
  std::size_t n_boundary_edges = 0;
  for (const auto& [edge, count] : directed)
    if (!directed.count({edge.second, edge.first})) ++n_boundary_edges;
  if (n_boundary_edges != boundary.size())
    throw GeometryError("boundary segment list does not cover the mesh boundary");
  boundary_loop();
}

std::vector<int> SolidMesh::boundary_loop() const {
  if (boundary.empty()) throw GeometryError("solid mesh has no boundary segments");
  std::map<int, int> by_start;
  for (int i = 0; i < static_cast<int>(boundary.size()); ++i) {
    if (!by_start.emplace(boundary[i].n0, i).second)
      throw GeometryError("solid boundary is not a single simple loop");
  }
  std::vector<int> loop;
  int cur = 0;
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    loop.push_back(cur);
    auto it = by_start.find(boundary[cur].n1);
    if (it == by_start.end()) throw GeometryError("solid boundary loop is open");
    cur = it->second;
  }
  if (cur != 0) throw GeometryError("solid boundary must be a single closed loop");
  return loop;
}

std::vector<int> SolidMesh::clamped_nodes() const {
  std::vector<int> out;
  for (const auto& s : boundary)
    if (s.tag == BoundaryTag::Clamped) {
      out.push_back(s.n0);
      out.push_back(s.n1);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double SolidMesh::min_element_size() const {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& el : elements)
    for (int k = 0; k < 4; ++k) h = std::min(h, (X[el[k]] - X[el[(k + 1) % 4]]).norm());
  return h;
}

Vec2 current_position(const SolidMesh& mesh, std::span<const double> d, int node) {
  Vec2 x = mesh.X[node];
  if (!d.empty()) x += Vec2(d[2 * node], d[2 * node + 1]);
  return x;
}

Polygon solid_outline(const SolidMesh& mesh, std::span<const double> d) {
  Polygon poly;
  for (int i : mesh.boundary_loop()) poly.push_back(current_position(mesh, d, mesh.boundary[i].n0));
  if (signed_area(poly) <= 0.0) throw GeometryError("deformed solid outline is inverted");
  return poly;
}

std::vector<InterfaceSegment> extract_interface(const SolidMesh& mesh, std::span<const double> d,
                                                double tol) {
  std::vector<InterfaceSegment> out;
  for (int i : mesh.boundary_loop()) {
    const auto& s = mesh.boundary[i];
    if (s.tag != BoundaryTag::Wet) continue;
    InterfaceSegment seg;
    seg.a = current_position(mesh, d, s.n0);
    seg.b = current_position(mesh, d, s.n1);
    seg.boundary_index = i;
    seg.node0 = s.n0;
    seg.node1 = s.n1;
    const double len = seg.length();
    if (len <= tol) throw GeometryError("degenerate interface segment");
    const Vec2 t = (seg.b - seg.a) / len;
    seg.normal = Vec2(-t.y(), t.x());  // solid lies on the left
    out.push_back(seg);
  }
  return out;
}

SolidMesh read_solid_mesh(std::istream& in) {
  SolidMesh m;
  std::string line;
  int lineno = 0;
  bool saw_dim = false;
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error("solid mesh line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    if (key == "dim") {
      int dim = 0;
      if (!(ss >> dim) || dim != 2) fail("only dim 2 is supported");
      saw_dim = true;
    } else if (key == "N") {
      double x, y;
      if (!(ss >> x >> y)) fail("expected 'N x y'");
      m.X.emplace_back(x, y);
    } else if (key == "E") {
      std::array<int, 4> e;
      if (!(ss >> e[0] >> e[1] >> e[2] >> e[3])) fail("expected 'E n0 n1 n2 n3'");
      m.elements.push_back(e);
    } else if (key == "B") {
      BoundarySegment b;
      std::string tag;
      if (!(ss >> b.n0 >> b.n1 >> tag)) fail("expected 'B n0 n1 tag'");
      try {
        b.tag = boundary_tag_from_string(tag);
      } catch (const std::exception& e) {
        fail(e.what());
      }
      m.boundary.push_back(b);
    } else {
      fail("unknown record '" + key + "'");
    }
    std::string extra;
    if (ss >> extra) fail("trailing tokens");
  }
  if (!saw_dim) throw std::runtime_error("solid mesh: missing 'dim 2' header");
  m.validate();
  return m;
}

SolidMesh read_solid_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open solid mesh '" + path + "'");
  return read_solid_mesh(in);
}

void write_solid_mesh(std::ostream& out, const SolidMesh& mesh) {
  out << "dim 2\n" << std::setprecision(17);
  for (const auto& x : mesh.X) out << "N " << x.x() << ' ' << x.y() << '\n';
  for (const auto& e : mesh.elements) out << "E " << e[0] << ' ' << e[1] << ' ' << e[2] << ' ' << e[3] << '\n';
  for (const auto& b : mesh.boundary) out << "B " << b.n0 << ' ' << b.n1 << ' ' << to_string(b.tag) << '\n';
}

SolidMesh make_rectangle_solid(const Vec2& lo, const Vec2& hi, int nx, int ny,
                               const std::array<BoundaryTag, 4>& side_tags) {
  if (nx < 1 || ny < 1) throw GeometryError("rectangle solid needs at least one element per direction");
  SolidMesh m;
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.X.emplace_back(lo.x() + (hi.x() - lo.x()) * i / nx, lo.y() + (hi.y() - lo.y()) * j / ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) m.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  // Counterclockwise: bottom, right, top, left.
  for (int i = 0; i < nx; ++i) m.boundary.push_back({id(i, 0), id(i + 1, 0), side_tags[2]});
  for (int j = 0; j < ny; ++j) m.boundary.push_back({id(nx, j), id(nx, j + 1), side_tags[1]});
  for (int i = nx; i > 0; --i) m.boundary.push_back({id(i, ny), id(i - 1, ny), side_tags[3]});
  for (int j = ny; j > 0; --j) m.boundary.push_back({id(0, j), id(0, j - 1), side_tags[0]});
  m.validate();
  return m;
}

}  // namespace fsi2d
