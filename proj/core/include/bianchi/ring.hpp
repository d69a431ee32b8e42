#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bianchi {

bool is_square_free(int64_t d);

// omega satisfies omega^2 = trace*omega - norm.
int64_t omega_trace(int64_t d);
int64_t omega_norm(int64_t d);

// a + b*omega_d, omega_d = (1+sqrt(-d))/2 for d = 3 mod 4, else sqrt(-d).
struct QuadInt {
  int64_t d = 1;
  int64_t a = 0;
  int64_t b = 0;

  QuadInt() = default;
  QuadInt(int64_t d_, int64_t a_, int64_t b_ = 0) : d(d_), a(a_), b(b_) {}

  static QuadInt omega(int64_t d) { return QuadInt(d, 0, 1); }
  bool is_zero() const { return a == 0 && b == 0; }
  int64_t norm() const;
  QuadInt conj() const;
  std::string str() const;

  friend bool operator==(const QuadInt& x, const QuadInt& y) {
    return x.d == y.d && x.a == y.a && x.b == y.b;
  }
  friend QuadInt operator+(const QuadInt& x, const QuadInt& y);
  friend QuadInt operator-(const QuadInt& x, const QuadInt& y);
  friend QuadInt operator-(const QuadInt& x);
  friend QuadInt operator*(const QuadInt& x, const QuadInt& y);
};

// Lattice n Z + (k + l omega) Z with 0 <= k < n, l > 0, l | n, l | k.
struct QuadIdeal {
  int64_t d = 1;
  int64_t n = 1;
  int64_t k = 0;
  int64_t l = 1;

  int64_t norm() const { return n * l; }
  bool is_unit() const { return n == 1 && l == 1; }
  bool contains(const QuadInt& x) const;
  std::string str() const;  // "(n,k,l)"

  // Accepts table triples with negative l (sign flip, then k mod n).
  static QuadIdeal from_triple(int64_t d, int64_t n, int64_t k, int64_t l);

  friend bool operator==(const QuadIdeal& x, const QuadIdeal& y) {
    return x.d == y.d && x.n == y.n && x.k == y.k && x.l == y.l;
  }
};

QuadIdeal ideal_from_generators(int64_t d, const std::vector<QuadInt>& gens);
QuadInt reduce_mod_ideal(const QuadInt& x, const QuadIdeal& I);
QuadIdeal ideal_mul(const QuadIdeal& I, const QuadIdeal& J);
// I is a subset of J.
bool ideal_subset(const QuadIdeal& I, const QuadIdeal& J);
QuadIdeal ideal_conj(const QuadIdeal& I);
std::vector<std::pair<QuadIdeal, int>> factor_ideal(const QuadIdeal& I);
uint64_t psl_order(const QuadIdeal& I);

// All ideals of norm <= max_norm (each listed once).
std::vector<QuadIdeal> ideals_up_to_norm(int64_t d, int64_t max_norm);
// Smallest generator list: a principal generator when one exists, else {n, k + l w}.
std::vector<QuadInt> ideal_generators(const QuadIdeal& I);
bool find_principal_generator(const QuadIdeal& I, QuadInt& out);

struct ProjMatrix {
  QuadInt a, b, c, e;  // [[a,b],[c,e]]

  ProjMatrix() = default;
  ProjMatrix(QuadInt a_, QuadInt b_, QuadInt c_, QuadInt e_)
      : a(a_), b(b_), c(c_), e(e_) {}
  static ProjMatrix identity(int64_t d);
  int64_t d() const { return a.d; }
  QuadInt det() const;
  ProjMatrix inverse() const;
  ProjMatrix neg() const;
  bool is_pm_identity() const;
  // Same element of PSL: equal up to sign.
  bool proj_equal(const ProjMatrix& o) const;
  std::string str() const;

  friend ProjMatrix operator*(const ProjMatrix& x, const ProjMatrix& y);
  friend bool operator==(const ProjMatrix& x, const ProjMatrix& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.e == y.e;
  }
};

ProjMatrix mat_pow(const ProjMatrix& m, int64_t k);

// O_d / I with elements indexed 0..N-1 (index = a + n*b for reduced a + b w).
class ResidueRing {
 public:
  explicit ResidueRing(const QuadIdeal& I);
  const QuadIdeal& ideal() const { return ideal_; }
  uint32_t size() const { return size_; }
  uint32_t encode(const QuadInt& x) const;
  QuadInt decode(uint32_t r) const;
  uint32_t add(uint32_t x, uint32_t y) const;
  uint32_t sub(uint32_t x, uint32_t y) const;
  uint32_t neg(uint32_t x) const { return neg_[x]; }
  uint32_t mul(uint32_t x, uint32_t y) const;

 private:
  QuadIdeal ideal_;
  uint32_t size_;
  std::vector<uint32_t> neg_;
  std::vector<uint32_t> mul_;  // dense table when small
};

// Element of PSL(2, O_d/I): canonical residue matrix packed into 64 bits.
using ProjKey = uint64_t;

class PslQuotient {
 public:
  explicit PslQuotient(const QuadIdeal& I);
  const ResidueRing& ring() const { return ring_; }
  const QuadIdeal& ideal() const { return ring_.ideal(); }
  ProjKey key(const ProjMatrix& m) const;
  ProjKey identity() const;
  ProjKey mul(ProjKey x, ProjKey y) const;
  ProjKey inverse(ProjKey x) const;
  ProjKey canonical(const std::array<uint32_t, 4>& r) const;
  std::array<uint32_t, 4> unpack(ProjKey x) const;
  // Canonical first row modulo sign, packed (Gamma_1 labels).
  uint64_t row_key(ProjKey x) const;
  uint64_t row_key(const ProjMatrix& m) const;
  std::array<QuadInt, 4> entries(ProjKey x) const;

 private:
  ResidueRing ring_;
};

// Entrywise reduction plus sign normalization.
std::array<QuadInt, 4> proj_canonicalize(const ProjMatrix& m, const QuadIdeal& I);

struct FiniteProjGroup {
  QuadIdeal ideal;
  std::vector<ProjKey> elements;
  std::unordered_map<ProjKey, uint32_t> lookup;
  std::vector<uint32_t> peripheral;  // indices of the peripheral image subgroup

  size_t size() const { return elements.size(); }
  bool contains(ProjKey k) const { return lookup.count(k) != 0; }
};

FiniteProjGroup enumerate_psl(const QuadIdeal& I, const std::vector<ProjMatrix>& generators,
                              size_t budget = 5000000);

// Closure of generator images inside PSL(2, O_d/I).
std::vector<ProjKey> subgroup_closure(const PslQuotient& Q, const std::vector<ProjKey>& gens,
                                      size_t budget = 5000000);

// Canonical left coset representative g H (minimum key over the coset).
ProjKey left_coset_key(const PslQuotient& Q, ProjKey g, const std::vector<ProjKey>& H);

// Parse "2", "1+w", "(1+s)/2", "[2, 1+s]", "d=2 gens=[1+w, 3]" into generators.
// Letters: w = omega_d, s = sqrt(-d), i = sqrt(-1) when d = 1.
std::vector<QuadInt> parse_ideal_literal(int64_t d, const std::string& text);
QuadInt parse_quad_int(int64_t d, const std::string& text);
// Pretty form in terms of sqrt(-d), e.g. "(1+sqrt(-7))/2".
std::string format_sqrt(const QuadInt& x);
std::string format_ideal(const QuadIdeal& I);

}  // namespace bianchi
