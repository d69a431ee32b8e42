#pragma once

#include <array>
#include <vector>

#include "bianchi/geometry.hpp"

namespace bianchi {

struct PolyFace {
  int label = -1;  // negative for bounding-box faces
  HalfSpace plane;
  std::vector<int> cycle;  // counter-clockwise seen from outside
};

struct PolyEdge {
  int u = -1, w = -1;
  int f1 = -1, f2 = -1;  // f1 sees u -> w along its cycle
};

// Convex polyhedron in scaled Klein coordinates with exact rational vertices.
class ConvexPolyhedron {
 public:
  static ConvexPolyhedron box(const mpq_class& half);

  // Intersects with h; returns false when h cuts nothing off.
  bool cut(const HalfSpace& h, int label);

  const std::vector<Vec3>& vertices() const { return verts_; }
  const std::vector<PolyFace>& faces() const { return faces_; }
  std::vector<PolyEdge> edges() const;
  size_t cuts_applied() const { return cuts_; }

 private:
  std::vector<Vec3> verts_;
  std::vector<std::array<double, 3>> approx_;
  std::vector<PolyFace> faces_;
  size_t cuts_ = 0;

  int add_vertex(const Vec3& v);
  void compact();
};

}  // namespace bianchi
