#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bianchi/domain.hpp"
#include "bianchi/ring.hpp"

namespace bianchi {

// p[i] = vertex of the neighbour matching vertex i.
using Perm4 = std::array<uint8_t, 4>;

constexpr Perm4 kIdentityPerm{0, 1, 2, 3};
Perm4 perm_inverse(const Perm4& p);
Perm4 perm_compose(const Perm4& p, const Perm4& q);  // p after q
bool perm_is_odd(const Perm4& p);

// Index 0..5 of the edge {a,b}; edge_vertices gives the inverse.
int edge_index(int a, int b);
std::array<int, 2> edge_vertices(int e);

struct Tetrahedron {
  std::array<int32_t, 4> nb{-1, -1, -1, -1};
  std::array<Perm4, 4> perm{kIdentityPerm, kIdentityPerm, kIdentityPerm, kIdentityPerm};
  std::array<bool, 4> ideal{false, false, false, false};
};

struct Triangulation {
  std::vector<Tetrahedron> tets;
  // Builder metadata: tet = copy * per_copy + domain simplex.
  int per_copy = 0;
  bool gamma1 = false;
  std::vector<uint64_t> copy_label;
  bool barycentric = false;

  size_t size() const { return tets.size(); }
};

struct Skeleton {
  std::vector<int> vertex_class;  // per (tet*4 + vertex)
  std::vector<int> edge_class;    // per (tet*6 + edge)
  std::vector<int8_t> edge_sign;  // orientation relative to the class representative
  std::vector<int> face_class;    // per (tet*4 + face)
  int vertices = 0, edges = 0, faces = 0;
  std::vector<bool> vertex_ideal;
  std::vector<int> edge_degree;
  std::vector<int> vertex_link_euler;
};

Skeleton compute_skeleton(const Triangulation& T);

struct CuspInfo {
  int count = 0;
  std::vector<int> cusp_of_class;                // -1 for finite classes
  std::vector<std::vector<int>> members;         // per cusp: tet*4 + vertex
};

struct VertexReport {
  CuspInfo cusps;
  int finite_vertices = 0;
  std::vector<int> link_euler;  // per vertex class
  long euler = 0;               // V - E + F - T
  bool links_ok = true;         // tori at cusps, spheres elsewhere
};

VertexReport classify_vertices(const Triangulation& T);
VertexReport classify_vertices(const Triangulation& T, const Skeleton& S);

// Checks the gluing is a fixed-point-free involution with consistent permutations.
void check_gluing(const Triangulation& T);

constexpr size_t kDefaultTetBudget = 2000000;

Triangulation build_principal(const FundamentalDomain& F, const QuadIdeal& I, size_t budget = kDefaultTetBudget);
Triangulation build_gamma1(const FundamentalDomain& F, const QuadIdeal& I, size_t budget = kDefaultTetBudget);
// The domain complex itself (one copy).
Triangulation single_copy(const FundamentalDomain& F);

// True when some edge degree is not the domain degree times the singular order.
bool detect_orbifold(const Triangulation& T, const FundamentalDomain& F);

std::string triangulation_to_json(const Triangulation& T);
Triangulation triangulation_from_json(const std::string& text);

}  // namespace bianchi
