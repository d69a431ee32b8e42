#include "bianchi/geometry.hpp"

#include "bianchi/errors.hpp"

namespace bianchi {

QuadRat to_rat(const QuadInt& x) {
  if (x.d % 4 == 3) {
    mpq_class h(x.b, 2);
    h.canonicalize();
    return QuadRat(mpq_class(x.a) + h, h);
  }
  return QuadRat(mpq_class(x.a), mpq_class(x.b));
}

QuadRat qr_add(const QuadRat& x, const QuadRat& y) { return QuadRat(x.re + y.re, x.im + y.im); }
QuadRat qr_sub(const QuadRat& x, const QuadRat& y) { return QuadRat(x.re - y.re, x.im - y.im); }
QuadRat qr_mul(int64_t d, const QuadRat& x, const QuadRat& y) {
  return QuadRat(x.re * y.re - d * x.im * y.im, x.re * y.im + x.im * y.re);
}
QuadRat qr_div(int64_t d, const QuadRat& x, const QuadRat& y) {
  mpq_class n = y.norm(d);
  if (sgn(n) == 0) throw std::domain_error("division by zero in Q(sqrt(-d))");
  QuadRat p = qr_mul(d, x, y.conj());
  return QuadRat(p.re / n, p.im / n);
}

RatMatrix RatMatrix::from(const ProjMatrix& m) {
  RatMatrix r;
  r.d = m.d();
  r.a = to_rat(m.a);
  r.b = to_rat(m.b);
  r.c = to_rat(m.c);
  r.e = to_rat(m.e);
  return r;
}

RatMatrix RatMatrix::identity(int64_t d) {
  RatMatrix r;
  r.d = d;
  r.a = QuadRat(1);
  r.b = QuadRat(0);
  r.c = QuadRat(0);
  r.e = QuadRat(1);
  return r;
}

RatMatrix RatMatrix::inverse() const {
  RatMatrix r;
  r.d = d;
  r.a = e;
  r.b = QuadRat(-b.re, -b.im);
  r.c = QuadRat(-c.re, -c.im);
  r.e = a;
  return r;
}

QuadRat RatMatrix::det() const { return qr_sub(qr_mul(d, a, e), qr_mul(d, b, c)); }

RatMatrix operator*(const RatMatrix& x, const RatMatrix& y) {
  int64_t d = x.d;
  RatMatrix r;
  r.d = d;
  r.a = qr_add(qr_mul(d, x.a, y.a), qr_mul(d, x.b, y.c));
  r.b = qr_add(qr_mul(d, x.a, y.b), qr_mul(d, x.b, y.e));
  r.c = qr_add(qr_mul(d, x.c, y.a), qr_mul(d, x.e, y.c));
  r.e = qr_add(qr_mul(d, x.c, y.b), qr_mul(d, x.e, y.e));
  return r;
}

HalfSpacePoint halfspace_action(const RatMatrix& m, const HalfSpacePoint& p) {
  const int64_t d = m.d;
  QuadRat num1 = qr_add(qr_mul(d, m.a, p.z), m.b);
  QuadRat den1 = qr_add(qr_mul(d, m.c, p.z), m.e);
  QuadRat z = qr_add(qr_mul(d, num1, den1.conj()), qr_mul(d, qr_mul(d, m.a, m.c.conj()), QuadRat(p.tsq)));
  mpq_class D = den1.norm(d) + m.c.norm(d) * p.tsq;
  HalfSpacePoint r;
  r.z = QuadRat(z.re / D, z.im / D);
  r.tsq = p.tsq / (D * D);
  return r;
}

HalfSpacePoint halfspace_action(const ProjMatrix& m, const HalfSpacePoint& p) {
  return halfspace_action(RatMatrix::from(m), p);
}

LorentzMatrix LorentzMatrix::identity(int64_t d) {
  LorentzMatrix L;
  L.d = d;
  for (int i = 0; i < 16; ++i) L.m[i] = (i % 5 == 0) ? 1 : 0;
  return L;
}

Vec4 LorentzMatrix::apply(const Vec4& x) const {
  Vec4 r;
  for (int i = 0; i < 4; ++i) {
    r[i] = 0;
    for (int j = 0; j < 4; ++j) r[i] += at(i, j) * x[j];
  }
  return r;
}

LorentzMatrix LorentzMatrix::inverse() const {
  const mpq_class q[4] = {1, -1, -1, mpq_class(-d)};
  LorentzMatrix r;
  r.d = d;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.at(i, j) = at(j, i) * q[j] / q[i];
  return r;
}

bool LorentzMatrix::preserves_form() const {
  const mpq_class q[4] = {1, -1, -1, mpq_class(-d)};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      mpq_class s = 0;
      for (int k = 0; k < 4; ++k) s += at(k, i) * q[k] * at(k, j);
      if (s != (i == j ? q[i] : mpq_class(0))) return false;
    }
  return true;
}

LorentzMatrix operator*(const LorentzMatrix& x, const LorentzMatrix& y) {
  LorentzMatrix r;
  r.d = x.d;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      mpq_class s = 0;
      for (int k = 0; k < 4; ++k) s += x.at(i, k) * y.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

Vec4 hermitian_action(const RatMatrix& g, const Vec4& x) {
  const int64_t d = g.d;
  // H(x) = [[A, B],[conj B, C]]
  QuadRat hA(x[0] + x[1]), hB(x[2], x[3]), hC(x[0] - x[1]);
  QuadRat Bc = hB.conj();
  QuadRat m00 = qr_add(qr_mul(d, g.a, hA), qr_mul(d, g.b, Bc));
  QuadRat m01 = qr_add(qr_mul(d, g.a, hB), qr_mul(d, g.b, hC));
  QuadRat m10 = qr_add(qr_mul(d, g.c, hA), qr_mul(d, g.e, Bc));
  QuadRat m11 = qr_add(qr_mul(d, g.c, hB), qr_mul(d, g.e, hC));
  QuadRat A = qr_add(qr_mul(d, m00, g.a.conj()), qr_mul(d, m01, g.b.conj()));
  QuadRat B = qr_add(qr_mul(d, m00, g.c.conj()), qr_mul(d, m01, g.e.conj()));
  QuadRat C = qr_add(qr_mul(d, m10, g.c.conj()), qr_mul(d, m11, g.e.conj()));
  return {(A.re + C.re) / 2, (A.re - C.re) / 2, B.re, B.im};
}

LorentzMatrix psl_to_lorentz(const RatMatrix& g) {
  LorentzMatrix L;
  L.d = g.d;
  for (int j = 0; j < 4; ++j) {
    Vec4 e{0, 0, 0, 0};
    e[j] = 1;
    Vec4 col = hermitian_action(g, e);
    for (int i = 0; i < 4; ++i) L.at(i, j) = col[i];
  }
  return L;
}

LorentzMatrix psl_to_lorentz(const ProjMatrix& m) { return psl_to_lorentz(RatMatrix::from(m)); }

mpq_class lorentz_form(int64_t d, const Vec4& x, const Vec4& y) {
  return x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - d * x[3] * y[3];
}

Vec4 hyperboloid_point(int64_t d, const HalfSpacePoint& p) {
  // Coordinates multiplied by t, so that no square root appears.
  mpq_class r = p.z.norm(d) + p.tsq;
  return {(r + 1) / 2, (r - 1) / 2, p.z.re, p.z.im};
}

Vec3 klein_point(int64_t d, const HalfSpacePoint& p) { return klein_of(hyperboloid_point(d, p)); }

Vec3 klein_of(const Vec4& x) { return {x[1] / x[0], x[2] / x[0], x[3] / x[0]}; }

HalfSpace bisector_from_image(int64_t d, const Vec4& p) {
  HalfSpace h;
  h.c1 = p[1];
  h.c2 = p[2];
  h.c3 = d * p[3];
  h.c0 = p[0] - 1;
  if (sgn(h.c1) == 0 && sgn(h.c2) == 0 && sgn(h.c3) == 0)
    throw Error(ErrorKind::DegenerateBisector, "element fixes the base point");
  return h;
}

HalfSpace bisector_halfspace(const ProjMatrix& m, const RatMatrix& conjugator) {
  RatMatrix mp = conjugator.inverse() * RatMatrix::from(m) * conjugator;
  LorentzMatrix L = psl_to_lorentz(mp);
  Vec4 p{L.at(0, 0), L.at(1, 0), L.at(2, 0), L.at(3, 0)};
  return bisector_from_image(m.d(), p);
}

RatMatrix make_conjugator(int64_t d, const mpq_class& r, const QuadRat& z0) {
  RatMatrix l;
  l.d = d;
  l.a = QuadRat(r);
  l.b = QuadRat(z0.re / r, z0.im / r);
  l.c = QuadRat(0);
  l.e = QuadRat(1 / r);
  return l;
}

std::string format_rat(const mpq_class& q) { return q.get_str(); }

}  // namespace bianchi
