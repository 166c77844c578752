#include "fsi2d/structured_mesh.hpp"

#include <cmath>
#include <string>

namespace fsi2d {

StructuredBackgroundMesh::StructuredBackgroundMesh(const Vec2& origin, double h1, double h2, int n1,
                                                   int n2)
    : origin_(origin), h1_(h1), h2_(h2), n1_(n1), n2_(n2) {
  if (!(h1 > 0.0) || !(h2 > 0.0)) throw GeometryError("structured mesh: non-positive spacing");
  if (n1 < 1 || n2 < 1) throw GeometryError("structured mesh: need at least one element per direction");
  build_facets();
}

StructuredBackgroundMesh StructuredBackgroundMesh::from_box(const Vec2& lo, const Vec2& hi, int n1,
                                                            int n2) {
  if (n1 < 1 || n2 < 1) throw GeometryError("structured mesh: need at least one element per direction");
  return StructuredBackgroundMesh(lo, (hi.x() - lo.x()) / n1, (hi.y() - lo.y()) / n2, n1, n2);
}

double StructuredBackgroundMesh::diameter() const { return std::hypot(h1_, h2_); }

Box StructuredBackgroundMesh::bounds() const {
  return {origin_, origin_ + Vec2(n1_ * h1_, n2_ * h2_)};
}

Vec2 StructuredBackgroundMesh::node(int id) const {
  const auto [i, j] = node_ij(id);
  return origin_ + Vec2(i * h1_, j * h2_);
}

std::array<int, 4> StructuredBackgroundMesh::element_nodes(int e) const {
  const auto [i, j] = element_ij(e);
  return {node_id(i, j), node_id(i + 1, j), node_id(i + 1, j + 1), node_id(i, j + 1)};
}

Vec2 StructuredBackgroundMesh::element_lower_left(int e) const {
  const auto [i, j] = element_ij(e);
  return origin_ + Vec2(i * h1_, j * h2_);
}

Vec2 StructuredBackgroundMesh::element_center(int e) const {
  return element_lower_left(e) + 0.5 * Vec2(h1_, h2_);
}

Polygon StructuredBackgroundMesh::element_polygon(int e) const {
  const Vec2 p = element_lower_left(e);
  return {p, p + Vec2(h1_, 0), p + Vec2(h1_, h2_), p + Vec2(0, h2_)};
}

int StructuredBackgroundMesh::locate(const Vec2& x, double tol) const {
  const double s = (x.x() - origin_.x()) / h1_;
  const double t = (x.y() - origin_.y()) / h2_;
  if (s < -tol || t < -tol || s > n1_ + tol || t > n2_ + tol) return -1;
  int i = static_cast<int>(std::floor(s));
  int j = static_cast<int>(std::floor(t));
  i = std::min(std::max(i, 0), n1_ - 1);
  j = std::min(std::max(j, 0), n2_ - 1);
  return element_id(i, j);
}

void StructuredBackgroundMesh::build_facets() {
  facets_.clear();
  element_facets_.assign(num_elements(), {-1, -1, -1, -1});
  // Vertical facets: between (i-1, j) and (i, j).
  for (int j = 0; j < n2_; ++j) {
    for (int i = 1; i < n1_; ++i) {
      Facet f;
      f.e0 = element_id(i - 1, j);
      f.e1 = element_id(i, j);
      f.a = node(node_id(i, j));
      f.b = node(node_id(i, j + 1));
      f.normal = Vec2(1, 0);
      f.length = h2_;
      f.vertical = true;
      const int id = static_cast<int>(facets_.size());
      element_facets_[f.e0][static_cast<int>(Side::Right)] = id;
      element_facets_[f.e1][static_cast<int>(Side::Left)] = id;
      facets_.push_back(f);
    }
  }
  // Horizontal facets: between (i, j-1) and (i, j).
  for (int j = 1; j < n2_; ++j) {
    for (int i = 0; i < n1_; ++i) {
      Facet f;
      f.e0 = element_id(i, j - 1);
      f.e1 = element_id(i, j);
      f.a = node(node_id(i, j));
      f.b = node(node_id(i + 1, j));
      f.normal = Vec2(0, 1);
      f.length = h1_;
      f.vertical = false;
      const int id = static_cast<int>(facets_.size());
      element_facets_[f.e0][static_cast<int>(Side::Top)] = id;
      element_facets_[f.e1][static_cast<int>(Side::Bottom)] = id;
      facets_.push_back(f);
    }
  }
}

std::vector<int> StructuredBackgroundMesh::element_facets(int e) const {
  std::vector<int> out;
  for (int f : element_facets_[e])
    if (f >= 0) out.push_back(f);
  return out;
}

std::vector<int> StructuredBackgroundMesh::node_elements(int node) const {
  const auto [i, j] = node_ij(node);
  std::vector<int> out;
  for (int dj = -1; dj <= 0; ++dj)
    for (int di = -1; di <= 0; ++di) {
      const int ei = i + di, ej = j + dj;
      if (ei >= 0 && ei < n1_ && ej >= 0 && ej < n2_) out.push_back(element_id(ei, ej));
    }
  return out;
}

bool StructuredBackgroundMesh::on_side(int node, Side side) const {
  const auto [i, j] = node_ij(node);
  switch (side) {
    case Side::Left: return i == 0;
    case Side::Right: return i == n1_;
    case Side::Bottom: return j == 0;
    case Side::Top: return j == n2_;
  }
  return false;
}

std::array<double, 4> RectQ1::values(const Vec2& x) const {
  const double s = (x.x() - x0.x()) / h1;
  const double t = (x.y() - x0.y()) / h2;
  return {(1 - s) * (1 - t), s * (1 - t), s * t, (1 - s) * t};
}

std::array<Vec2, 4> RectQ1::gradients(const Vec2& x) const {
  const double s = (x.x() - x0.x()) / h1;
  const double t = (x.y() - x0.y()) / h2;
  return {Vec2(-(1 - t) / h1, -(1 - s) / h2), Vec2((1 - t) / h1, -s / h2), Vec2(t / h1, s / h2),
          Vec2(-t / h1, (1 - s) / h2)};
}

std::array<double, 4> RectQ1::mixed() const {
  const double c = 1.0 / (h1 * h2);
  return {c, -c, c, -c};
}

}  // namespace fsi2d
