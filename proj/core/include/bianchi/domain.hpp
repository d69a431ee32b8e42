#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bianchi/geometry.hpp"
#include "bianchi/polyhedron.hpp"
#include "bianchi/ring.hpp"

namespace bianchi {

const std::vector<int64_t>& supported_discriminants();  // the d values with bundled data
bool is_supported_d(int64_t d);

// Sign-normalized representative of +-m (first nonzero coefficient positive).
ProjMatrix proj_normalize(const ProjMatrix& m);

// All elements of PSL(2, O_d) whose entries have norm <= radius^2.
std::vector<ProjMatrix> sample_elements(int64_t d, int64_t radius);

// Smallest k in {1,..,max_k} with m^k = +-Id, or 0.
int projective_order(const ProjMatrix& m, int max_k = 3);

struct DirichletDomain {
  int64_t d = 1;
  int64_t sample_radius = 0;
  size_t sample_size = 0;
  RatMatrix conjugator;
  ConvexPolyhedron poly;
  std::vector<ProjMatrix> face_matrix;          // g_f, carries the mate face onto f
  std::vector<int> mate;                        // mate face index
  std::vector<std::vector<int>> vertex_image;   // g_f^-1 applied to cycle[i], as a vertex index
  std::vector<bool> ideal;                      // per vertex
  std::vector<PolyEdge> edges;
  std::vector<int> edge_order;                  // singular order per edge
  int ideal_vertex_classes = 0;
  double volume = 0;
};

// Candidate polyhedron for the given sample radius with all closure checks applied.
DirichletDomain dirichlet_domain(int64_t d, int64_t sample_radius);
// Grows the radius until the candidate verifies (pairings, orders, covolume).
DirichletDomain verified_dirichlet_domain(int64_t d, int64_t start_radius = 0, int64_t max_radius = 24);

std::vector<int> edge_singular_orders(const DirichletDomain& D);

// Numerics.
double clausen_cl2(double theta);
double lobachevsky(double x);
int kronecker_symbol(int64_t D, int64_t n);
int64_t field_discriminant(int64_t d);
double bianchi_covolume(int64_t d);
double domain_volume(const DirichletDomain& D);

struct DomainSimplex {
  int mate = -1;
  ProjMatrix matrix;                 // mating matrix g_j (face 3)
  std::array<int, 3> singular{1, 1, 1};  // face-3 edges (0,1), (0,2), (1,2)
  bool ideal_vertex = false;
  std::array<int, 3> neighbors{-1, -1, -1};  // gluings of faces 0..2
};

struct FundamentalDomain {
  int64_t d = 1;
  std::string omega_convention = "omega_d";
  std::vector<DomainSimplex> simplices;

  size_t size() const { return simplices.size(); }
};

FundamentalDomain barycentric_export(const DirichletDomain& D);

// Walk around edge (a,b) of simplex j in the single-copy complex.
struct EdgeWalk {
  int degree = 0;
  ProjMatrix holonomy;
};
EdgeWalk walk_domain_edge(const FundamentalDomain& F, int j, int a, int b);
// Singular order of edge (a,b) of simplex j (1 off face 3).
int simplex_edge_order(const DomainSimplex& s, int a, int b);
// Recomputes singular triples from holonomy around the face-3 edges.
void assign_singular_orders(FundamentalDomain& F);
// Structural checks: involutions, inverse matrices.
void validate_domain(const FundamentalDomain& F);

std::string domain_to_json(const FundamentalDomain& F);
FundamentalDomain domain_from_json(const std::string& text);

constexpr int kDomainFormatVersion = 1;
// Reads the cached domain for d if present, else computes, verifies and writes it.
FundamentalDomain load_or_compute_domain(int64_t d, const std::string& cache_dir, bool* from_cache = nullptr);

}  // namespace bianchi
