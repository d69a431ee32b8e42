#include "bianchi/ring.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "bianchi/errors.hpp"

namespace bianchi {

namespace {

int64_t ck_mul(int64_t x, int64_t y) {
  int64_t r;
  if (__builtin_mul_overflow(x, y, &r)) throw std::overflow_error("QuadInt overflow");
  return r;
}
int64_t ck_add(int64_t x, int64_t y) {
  int64_t r;
  if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("QuadInt overflow");
  return r;
}
int64_t ck_sub(int64_t x, int64_t y) {
  int64_t r;
  if (__builtin_sub_overflow(x, y, &r)) throw std::overflow_error("QuadInt overflow");
  return r;
}
int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
int64_t pos_mod(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

struct Vec2 {
  int64_t a, b;
};

// Hermite form of the lattice spanned by vs: returns (n, k, l).
QuadIdeal lattice_hnf(int64_t d, std::vector<Vec2> vs) {
  vs.erase(std::remove_if(vs.begin(), vs.end(), [](const Vec2& v) { return v.a == 0 && v.b == 0; }),
           vs.end());
  if (vs.empty()) throw Error(ErrorKind::ZeroIdeal, "all generators are zero");
  for (;;) {
    int piv = -1;
    for (size_t i = 0; i < vs.size(); ++i)
      if (vs[i].b != 0 && (piv < 0 || std::llabs(vs[i].b) < std::llabs(vs[piv].b))) piv = (int)i;
    if (piv < 0) throw Error(ErrorKind::ZeroIdeal, "lattice has rank < 2");
    bool done = true;
    for (size_t j = 0; j < vs.size(); ++j) {
      if ((int)j == piv || vs[j].b == 0) continue;
      int64_t q = vs[j].b / vs[piv].b;
      vs[j].a = ck_sub(vs[j].a, ck_mul(q, vs[piv].a));
      vs[j].b = ck_sub(vs[j].b, ck_mul(q, vs[piv].b));
      if (vs[j].b != 0) done = false;
    }
    if (done) {
      Vec2 p = vs[piv];
      int64_t n = 0;
      for (size_t j = 0; j < vs.size(); ++j)
        if ((int)j != piv) n = std::gcd(n, std::llabs(vs[j].a));
      if (n == 0) throw Error(ErrorKind::ZeroIdeal, "lattice has rank < 2");
      if (p.b < 0) {
        p.a = -p.a;
        p.b = -p.b;
      }
      QuadIdeal I;
      I.d = d;
      I.n = n;
      I.k = pos_mod(p.a, n);
      I.l = p.b;
      return I;
    }
  }
}

}  // namespace

bool is_square_free(int64_t d) {
  if (d <= 0) return false;
  for (int64_t p = 2; p * p <= d; ++p)
    if (d % (p * p) == 0) return false;
  return true;
}

int64_t omega_trace(int64_t d) { return (d % 4 == 3) ? 1 : 0; }
int64_t omega_norm(int64_t d) { return (d % 4 == 3) ? (1 + d) / 4 : d; }

int64_t QuadInt::norm() const {
  int64_t t = omega_trace(d), nw = omega_norm(d);
  return ck_add(ck_add(ck_mul(a, a), ck_mul(t, ck_mul(a, b))), ck_mul(nw, ck_mul(b, b)));
}

QuadInt QuadInt::conj() const { return QuadInt(d, ck_add(a, ck_mul(b, omega_trace(d))), -b); }

std::string QuadInt::str() const {
  std::ostringstream os;
  if (b == 0) {
    os << a;
  } else {
    if (a != 0) os << a << (b > 0 ? "+" : "-");
    else if (b < 0) os << "-";
    int64_t ab = std::llabs(b);
    if (ab != 1) os << ab << "*";
    os << "w";
  }
  return os.str();
}

QuadInt operator+(const QuadInt& x, const QuadInt& y) {
  return QuadInt(x.d, ck_add(x.a, y.a), ck_add(x.b, y.b));
}
QuadInt operator-(const QuadInt& x, const QuadInt& y) {
  return QuadInt(x.d, ck_sub(x.a, y.a), ck_sub(x.b, y.b));
}
QuadInt operator-(const QuadInt& x) { return QuadInt(x.d, -x.a, -x.b); }
QuadInt operator*(const QuadInt& x, const QuadInt& y) {
  int64_t t = omega_trace(x.d), nw = omega_norm(x.d);
  int64_t bb = ck_mul(x.b, y.b);
  int64_t a = ck_sub(ck_mul(x.a, y.a), ck_mul(bb, nw));
  int64_t b = ck_add(ck_add(ck_mul(x.a, y.b), ck_mul(x.b, y.a)), ck_mul(bb, t));
  return QuadInt(x.d, a, b);
}

bool QuadIdeal::contains(const QuadInt& x) const { return reduce_mod_ideal(x, *this).is_zero(); }

std::string QuadIdeal::str() const {
  std::ostringstream os;
  os << "(" << n << "," << k << "," << l << ")";
  return os.str();
}

QuadIdeal QuadIdeal::from_triple(int64_t d, int64_t n, int64_t k, int64_t l) {
  if (n <= 0 || l == 0) throw Error(ErrorKind::ParseError, "invalid triple");
  if (l < 0) {
    k = -k;
    l = -l;
  }
  QuadIdeal I;
  I.d = d;
  I.n = n;
  I.k = pos_mod(k, n);
  I.l = l;
  if (n % l != 0 || I.k % l != 0) throw Error(ErrorKind::ParseError, "triple is not an ideal lattice");
  QuadInt w = QuadInt::omega(d);
  if (!I.contains(QuadInt(d, n) * w) || !I.contains(QuadInt(d, I.k, I.l) * w))
    throw Error(ErrorKind::ParseError, "triple is not closed under omega");
  return I;
}

QuadIdeal ideal_from_generators(int64_t d, const std::vector<QuadInt>& gens) {
  if (!is_square_free(d)) throw Error(ErrorKind::NotSquareFree, "d=" + std::to_string(d));
  std::vector<Vec2> vs;
  QuadInt w = QuadInt::omega(d);
  for (const QuadInt& g0 : gens) {
    QuadInt g(d, g0.a, g0.b);
    QuadInt gw = g * w;
    vs.push_back({g.a, g.b});
    vs.push_back({gw.a, gw.b});
  }
  QuadIdeal I = lattice_hnf(d, vs);
  if (I.n % I.l != 0 || I.k % I.l != 0)
    throw Error(ErrorKind::ZeroIdeal, "lattice normalization failed");
  return I;
}

QuadInt reduce_mod_ideal(const QuadInt& x, const QuadIdeal& I) {
  int64_t q = floor_div(x.b, I.l);
  int64_t a = ck_sub(x.a, ck_mul(q, I.k));
  int64_t b = ck_sub(x.b, ck_mul(q, I.l));
  return QuadInt(I.d, pos_mod(a, I.n), b);
}

QuadIdeal ideal_mul(const QuadIdeal& I, const QuadIdeal& J) {
  QuadInt a1(I.d, I.n), a2(I.d, I.k, I.l), b1(J.d, J.n), b2(J.d, J.k, J.l);
  return ideal_from_generators(I.d, {a1 * b1, a1 * b2, a2 * b1, a2 * b2});
}

bool ideal_subset(const QuadIdeal& I, const QuadIdeal& J) {
  return J.contains(QuadInt(I.d, I.n)) && J.contains(QuadInt(I.d, I.k, I.l));
}

QuadIdeal ideal_conj(const QuadIdeal& I) {
  return ideal_from_generators(I.d, {QuadInt(I.d, I.n), QuadInt(I.d, I.k, I.l).conj()});
}

std::vector<std::pair<QuadIdeal, int>> factor_ideal(const QuadIdeal& I) {
  std::vector<std::pair<QuadIdeal, int>> out;
  int64_t N = I.norm();
  const int64_t d = I.d, t = omega_trace(d), nw = omega_norm(d);
  int64_t rem = N;
  for (int64_t p = 2; p <= rem; ++p) {
    if (rem % p != 0) continue;
    while (rem % p == 0) rem /= p;
    std::vector<QuadIdeal> primes;
    for (int64_t r = 0; r < p; ++r) {
      if (pos_mod(r * r - t * r + nw, p) != 0) continue;
      QuadIdeal P = ideal_from_generators(d, {QuadInt(d, p), QuadInt(d, -r, 1)});
      if (std::find(primes.begin(), primes.end(), P) == primes.end()) primes.push_back(P);
    }
    if (primes.empty()) primes.push_back(ideal_from_generators(d, {QuadInt(d, p)}));
    for (const QuadIdeal& P : primes) {
      if (P.norm() != p && P.norm() != p * p)
        throw Error(ErrorKind::FactorizationFailed, "unexpected prime norm over " + std::to_string(p));
      int e = 0;
      QuadIdeal J = P;
      while (ideal_subset(I, J)) {
        ++e;
        J = ideal_mul(J, P);
      }
      if (e > 0) out.push_back({P, e});
    }
  }
  QuadIdeal prod = ideal_from_generators(d, {QuadInt(d, 1)});
  for (auto& [P, e] : out)
    for (int i = 0; i < e; ++i) prod = ideal_mul(prod, P);
  if (!(prod == I)) throw Error(ErrorKind::FactorizationFailed, "product mismatch for " + I.str());
  return out;
}

uint64_t psl_order(const QuadIdeal& I) {
  unsigned __int128 N = (unsigned __int128)I.norm();
  unsigned __int128 r = N * N * N;
  for (auto& [P, e] : factor_ideal(I)) {
    unsigned __int128 q = (unsigned __int128)P.norm() * P.norm();
    r = r / q * (q - 1);
  }
  if (!I.contains(QuadInt(I.d, 2))) r /= 2;
  return (uint64_t)r;
}

std::vector<QuadIdeal> ideals_up_to_norm(int64_t d, int64_t max_norm) {
  std::vector<QuadIdeal> out;
  QuadInt w = QuadInt::omega(d);
  for (int64_t N = 1; N <= max_norm; ++N) {
    for (int64_t l = 1; l <= N; ++l) {
      if (N % l) continue;
      int64_t n = N / l;
      if (n % l) continue;
      for (int64_t k = 0; k < n; k += l) {
        QuadIdeal I;
        I.d = d;
        I.n = n;
        I.k = k;
        I.l = l;
        if (I.contains(QuadInt(d, n) * w) && I.contains(QuadInt(d, k, l) * w)) out.push_back(I);
      }
    }
  }
  return out;
}

bool find_principal_generator(const QuadIdeal& I, QuadInt& out) {
  const int64_t d = I.d, N = I.norm();
  bool found = false;
  int64_t bmax = (int64_t)std::ceil(2.0 * std::sqrt((double)N / (double)d)) + 1;
  int64_t amax = (int64_t)std::ceil(std::sqrt((double)N)) + bmax + 1;
  auto better = [](const QuadInt& x, const QuadInt& y) {
    auto kx = std::make_tuple(std::llabs(x.b), x.b < 0, std::llabs(x.a), x.a < 0);
    auto ky = std::make_tuple(std::llabs(y.b), y.b < 0, std::llabs(y.a), y.a < 0);
    return kx < ky;
  };
  for (int64_t b = -bmax; b <= bmax; ++b) {
    for (int64_t a = -amax; a <= amax; ++a) {
      QuadInt x(d, a, b);
      if (x.is_zero() || x.norm() != N || !I.contains(x)) continue;
      if (!found || better(x, out)) {
        out = x;
        found = true;
      }
    }
  }
  return found;
}

std::vector<QuadInt> ideal_generators(const QuadIdeal& I) {
  QuadInt g;
  if (find_principal_generator(I, g)) return {g};
  return {QuadInt(I.d, I.n), QuadInt(I.d, I.k, I.l)};
}

ProjMatrix ProjMatrix::identity(int64_t d) {
  return ProjMatrix(QuadInt(d, 1), QuadInt(d, 0), QuadInt(d, 0), QuadInt(d, 1));
}
QuadInt ProjMatrix::det() const { return a * e - b * c; }
ProjMatrix ProjMatrix::inverse() const { return ProjMatrix(e, -b, -c, a); }
ProjMatrix ProjMatrix::neg() const { return ProjMatrix(-a, -b, -c, -e); }
bool ProjMatrix::is_pm_identity() const {
  return b.is_zero() && c.is_zero() && ((a.a == 1 && a.b == 0 && e.a == 1 && e.b == 0) ||
                                        (a.a == -1 && a.b == 0 && e.a == -1 && e.b == 0));
}
bool ProjMatrix::proj_equal(const ProjMatrix& o) const { return *this == o || *this == o.neg(); }
std::string ProjMatrix::str() const {
  return "[[" + a.str() + "," + b.str() + "],[" + c.str() + "," + e.str() + "]]";
}
ProjMatrix operator*(const ProjMatrix& x, const ProjMatrix& y) {
  return ProjMatrix(x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.e, x.c * y.a + x.e * y.c,
                    x.c * y.b + x.e * y.e);
}

ProjMatrix mat_pow(const ProjMatrix& m, int64_t k) {
  ProjMatrix base = k < 0 ? m.inverse() : m;
  uint64_t n = (uint64_t)(k < 0 ? -k : k);
  ProjMatrix r = ProjMatrix::identity(m.d());
  while (n) {
    if (n & 1) r = r * base;
    base = base * base;
    n >>= 1;
  }
  return r;
}

ResidueRing::ResidueRing(const QuadIdeal& I) : ideal_(I) {
  if (I.norm() > 65535) throw Error(ErrorKind::BudgetExceeded, "residue ring too large: " + I.str());
  size_ = (uint32_t)I.norm();
  neg_.resize(size_);
  for (uint32_t x = 0; x < size_; ++x) neg_[x] = encode(-decode(x));
  if (size_ <= 1024) {
    mul_.resize((size_t)size_ * size_);
    for (uint32_t x = 0; x < size_; ++x)
      for (uint32_t y = 0; y < size_; ++y) mul_[(size_t)x * size_ + y] = encode(decode(x) * decode(y));
  }
}

uint32_t ResidueRing::encode(const QuadInt& x) const {
  QuadInt r = reduce_mod_ideal(QuadInt(ideal_.d, x.a, x.b), ideal_);
  return (uint32_t)(r.a + ideal_.n * r.b);
}
QuadInt ResidueRing::decode(uint32_t r) const {
  return QuadInt(ideal_.d, (int64_t)(r % ideal_.n), (int64_t)(r / ideal_.n));
}
uint32_t ResidueRing::add(uint32_t x, uint32_t y) const {
  int64_t n = ideal_.n, l = ideal_.l;
  int64_t a = (int64_t)(x % n) + (int64_t)(y % n);
  int64_t b = (int64_t)(x / n) + (int64_t)(y / n);
  if (b >= l) {
    b -= l;
    a -= ideal_.k;
  }
  a = pos_mod(a, n);
  return (uint32_t)(a + n * b);
}
uint32_t ResidueRing::sub(uint32_t x, uint32_t y) const { return add(x, neg_[y]); }
uint32_t ResidueRing::mul(uint32_t x, uint32_t y) const {
  if (!mul_.empty()) return mul_[(size_t)x * size_ + y];
  return encode(decode(x) * decode(y));
}

PslQuotient::PslQuotient(const QuadIdeal& I) : ring_(I) {}

ProjKey PslQuotient::canonical(const std::array<uint32_t, 4>& r) const {
  std::array<uint32_t, 4> m{ring_.neg(r[0]), ring_.neg(r[1]), ring_.neg(r[2]), ring_.neg(r[3])};
  const std::array<uint32_t, 4>& c = (m < r) ? m : r;
  return ((uint64_t)c[0] << 48) | ((uint64_t)c[1] << 32) | ((uint64_t)c[2] << 16) | (uint64_t)c[3];
}

std::array<uint32_t, 4> PslQuotient::unpack(ProjKey x) const {
  return {(uint32_t)(x >> 48) & 0xffff, (uint32_t)(x >> 32) & 0xffff, (uint32_t)(x >> 16) & 0xffff,
          (uint32_t)x & 0xffff};
}

ProjKey PslQuotient::key(const ProjMatrix& m) const {
  return canonical({ring_.encode(m.a), ring_.encode(m.b), ring_.encode(m.c), ring_.encode(m.e)});
}

ProjKey PslQuotient::identity() const { return key(ProjMatrix::identity(ideal().d)); }

ProjKey PslQuotient::mul(ProjKey x, ProjKey y) const {
  auto p = unpack(x), q = unpack(y);
  const ResidueRing& R = ring_;
  return canonical({R.add(R.mul(p[0], q[0]), R.mul(p[1], q[2])), R.add(R.mul(p[0], q[1]), R.mul(p[1], q[3])),
                    R.add(R.mul(p[2], q[0]), R.mul(p[3], q[2])), R.add(R.mul(p[2], q[1]), R.mul(p[3], q[3]))});
}

ProjKey PslQuotient::inverse(ProjKey x) const {
  auto p = unpack(x);
  return canonical({p[3], ring_.neg(p[1]), ring_.neg(p[2]), p[0]});
}

uint64_t PslQuotient::row_key(ProjKey x) const {
  auto p = unpack(x);
  std::pair<uint32_t, uint32_t> r{p[0], p[1]}, m{ring_.neg(p[0]), ring_.neg(p[1])};
  auto c = std::min(r, m);
  return ((uint64_t)c.first << 32) | c.second;
}

uint64_t PslQuotient::row_key(const ProjMatrix& m) const { return row_key(key(m)); }

std::array<QuadInt, 4> PslQuotient::entries(ProjKey x) const {
  auto p = unpack(x);
  return {ring_.decode(p[0]), ring_.decode(p[1]), ring_.decode(p[2]), ring_.decode(p[3])};
}

std::array<QuadInt, 4> proj_canonicalize(const ProjMatrix& m, const QuadIdeal& I) {
  PslQuotient Q(I);
  return Q.entries(Q.key(m));
}

std::vector<ProjKey> subgroup_closure(const PslQuotient& Q, const std::vector<ProjKey>& gens, size_t budget) {
  std::vector<ProjKey> elems{Q.identity()};
  std::unordered_map<ProjKey, uint32_t> seen{{elems[0], 0}};
  for (size_t i = 0; i < elems.size(); ++i) {
    for (ProjKey g : gens) {
      ProjKey h = Q.mul(elems[i], g);
      if (seen.emplace(h, (uint32_t)elems.size()).second) {
        elems.push_back(h);
        if (elems.size() > budget) throw Error(ErrorKind::BudgetExceeded, "group closure exceeds budget");
      }
    }
  }
  return elems;
}

FiniteProjGroup enumerate_psl(const QuadIdeal& I, const std::vector<ProjMatrix>& generators, size_t budget) {
  PslQuotient Q(I);
  std::vector<ProjKey> gens;
  for (const auto& g : generators) gens.push_back(Q.key(g));
  FiniteProjGroup G;
  G.ideal = I;
  G.elements = subgroup_closure(Q, gens, budget);
  G.lookup.reserve(G.elements.size() * 2);
  for (uint32_t i = 0; i < G.elements.size(); ++i) G.lookup.emplace(G.elements[i], i);
  return G;
}

ProjKey left_coset_key(const PslQuotient& Q, ProjKey g, const std::vector<ProjKey>& H) {
  ProjKey best = ~0ull;
  for (ProjKey h : H) best = std::min(best, Q.mul(g, h));
  return best;
}

}  // namespace bianchi
