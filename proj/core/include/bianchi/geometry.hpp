#pragma once

#include <gmpxx.h>

#include <array>
#include <string>
#include <vector>

#include "bianchi/ring.hpp"

namespace bianchi {

// re + im*sqrt(-d) with rational coefficients.
struct QuadRat {
  mpq_class re, im;

  QuadRat() = default;
  QuadRat(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}

  QuadRat conj() const { return QuadRat(re, -im); }
  mpq_class norm(int64_t d) const { return re * re + d * im * im; }
  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  friend bool operator==(const QuadRat& x, const QuadRat& y) { return x.re == y.re && x.im == y.im; }
};

QuadRat to_rat(const QuadInt& x);
QuadRat qr_add(const QuadRat& x, const QuadRat& y);
QuadRat qr_sub(const QuadRat& x, const QuadRat& y);
QuadRat qr_mul(int64_t d, const QuadRat& x, const QuadRat& y);
QuadRat qr_div(int64_t d, const QuadRat& x, const QuadRat& y);

// z + t j, stored with tsq = t^2.
struct HalfSpacePoint {
  QuadRat z;
  mpq_class tsq;
};

// 2x2 matrix over Q(sqrt(-d)), determinant 1.
struct RatMatrix {
  int64_t d = 1;
  QuadRat a, b, c, e;

  static RatMatrix from(const ProjMatrix& m);
  static RatMatrix identity(int64_t d);
  RatMatrix inverse() const;
  QuadRat det() const;
  friend RatMatrix operator*(const RatMatrix& x, const RatMatrix& y);
};

HalfSpacePoint halfspace_action(const RatMatrix& m, const HalfSpacePoint& p);
HalfSpacePoint halfspace_action(const ProjMatrix& m, const HalfSpacePoint& p);

using Vec4 = std::array<mpq_class, 4>;
using Vec3 = std::array<mpq_class, 3>;

// Acts on (x0,x1,x2,x3) preserving x0^2 - x1^2 - x2^2 - d*x3^2.
struct LorentzMatrix {
  int64_t d = 1;
  std::array<mpq_class, 16> m;

  static LorentzMatrix identity(int64_t d);
  const mpq_class& at(int r, int c) const { return m[r * 4 + c]; }
  mpq_class& at(int r, int c) { return m[r * 4 + c]; }
  Vec4 apply(const Vec4& x) const;
  LorentzMatrix inverse() const;  // Q^-1 L^T Q
  bool preserves_form() const;
  friend LorentzMatrix operator*(const LorentzMatrix& x, const LorentzMatrix& y);
  friend bool operator==(const LorentzMatrix& x, const LorentzMatrix& y) { return x.m == y.m; }
};

// g H(x) g* read back in coordinates; equals psl_to_lorentz(g).apply(x).
Vec4 hermitian_action(const RatMatrix& g, const Vec4& x);
LorentzMatrix psl_to_lorentz(const ProjMatrix& m);
LorentzMatrix psl_to_lorentz(const RatMatrix& m);

mpq_class lorentz_form(int64_t d, const Vec4& x, const Vec4& y);
Vec4 hyperboloid_point(int64_t d, const HalfSpacePoint& p);  // scaled by t
// Scaled Klein coordinates (x1,x2,x3)/x0.
Vec3 klein_point(int64_t d, const HalfSpacePoint& p);
Vec3 klein_of(const Vec4& x);

// c1 x + c2 y + c3 z <= c0 in scaled Klein coordinates.
struct HalfSpace {
  mpq_class c1, c2, c3, c0;

  mpq_class eval(const Vec3& p) const { return c1 * p[0] + c2 * p[1] + c3 * p[2] - c0; }
};

// Half-space of points at least as close to the base point as to its image under l^-1 m l.
HalfSpace bisector_halfspace(const ProjMatrix& m, const RatMatrix& conjugator);
HalfSpace bisector_from_image(int64_t d, const Vec4& p);

// [[r, z0/r],[0, 1/r]]
RatMatrix make_conjugator(int64_t d, const mpq_class& r, const QuadRat& z0);

std::string format_rat(const mpq_class& q);

}  // namespace bianchi
