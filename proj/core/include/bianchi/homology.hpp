#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "bianchi/triangulation.hpp"

namespace bianchi {

struct SparseIntMatrix {
  struct Entry {
    int row, col;
    mpz_class value;
  };
  int rows = 0, cols = 0;
  std::vector<Entry> entries;

  SparseIntMatrix() = default;
  SparseIntMatrix(int r, int c) : rows(r), cols(c) {}

  void add(int r, int c, const mpz_class& v);
  // Merges duplicate positions and drops zeros.
  void normalize();
  std::vector<std::vector<mpz_class>> dense() const;
  static SparseIntMatrix from_dense(const std::vector<std::vector<mpz_class>>& a);
  SparseIntMatrix multiply(const SparseIntMatrix& b) const;
  bool is_zero() const;
};

struct SnfResult {
  int rank = 0;
  std::vector<mpz_class> divisors;  // elementary divisors > 1, each dividing the next
  size_t sparse_pivots = 0;
  int residual_rows = 0, residual_cols = 0;
  bool overflowed = false;
};

SnfResult smith_normal_form(const SparseIntMatrix& A);

// Dense SNF; returns every nonzero diagonal entry (units included).
std::vector<mpz_class> dense_smith_diagonal(std::vector<std::vector<mpz_class>> a);

struct AbelianGroup {
  int rank = 0;
  std::vector<mpz_class> divisors;

  bool trivial() const { return rank == 0 && divisors.empty(); }
  bool finite() const { return rank == 0; }
  // Order when finite.
  mpz_class order() const;
  std::string str() const;
  bool operator==(const AbelianGroup& o) const { return rank == o.rank && divisors == o.divisors; }
  // Canonicalises an arbitrary list of cyclic orders (0 = Z, 1 dropped).
  static AbelianGroup from_cyclic(int free_rank, std::vector<mpz_class> orders);
  static AbelianGroup parse(const std::string& text);
};

AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b);

struct ChainComplex {
  SparseIntMatrix d2;  // edges x faces
  SparseIntMatrix d1;  // vertices x edges
  int vertices = 0, edges = 0, faces = 0;
};

ChainComplex boundary_matrices(const Triangulation& T);

// Orientation per tetrahedron (+1/-1), propagated across gluings.
std::vector<int> orient(const Triangulation& T);

struct HomologyResult {
  AbelianGroup quotient;  // H1 of the cone-compactified complex
  AbelianGroup h1;        // quotient + Z^cusps
  int cusps = 0;
};

HomologyResult h1_with_quotient(const Triangulation& T);

enum class ObstructionKind { MinCoverDegree, Gamma1Degree, PrincipalCover };
enum class Verdict { Excluded, Inconclusive };

struct ObstructionData {
  std::optional<mpz_class> quotient_order;  // nullopt: infinite
  mpz_class degree;
};

Verdict cover_obstruction(ObstructionKind kind, const ObstructionData& data);
std::string verdict_name(Verdict v);

// |PSL(2,O/J)| / |PSL(2,O/I)| for J inside I.
mpz_class principal_cover_degree(const QuadIdeal& J, const QuadIdeal& I);

}  // namespace bianchi
