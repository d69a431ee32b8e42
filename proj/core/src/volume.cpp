#include <cmath>
#include <numbers>

#include "bianchi/domain.hpp"

namespace bianchi {

double clausen_cl2(double theta) {
  const double two_pi = 2 * std::numbers::pi;
  theta = std::fmod(theta, two_pi);
  if (theta > std::numbers::pi) theta -= two_pi;
  if (theta <= -std::numbers::pi) theta += two_pi;
  if (theta == 0) return 0;
  double s = theta - theta * std::log(std::abs(theta));
  const double r = (theta / two_pi) * (theta / two_pi);
  double pw = theta;
  for (int n = 1; n < 200; ++n) {
    pw *= r;
    double term = std::riemann_zeta(2.0 * n) / (n * (2.0 * n + 1)) * pw;
    s += term;
    if (std::abs(term) < 1e-18) break;
  }
  return s;
}

double lobachevsky(double x) { return 0.5 * clausen_cl2(2 * x); }

int kronecker_symbol(int64_t D, int64_t n) {
  if (n == 0) return std::llabs(D) == 1 ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (D < 0) result = -result;
  }
  for (int64_t p = 2; p * p <= n || n > 1; ++p) {
    if (p * p > n) p = n;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e == 0) continue;
    int chi;
    if (p == 2) {
      int64_t r = ((D % 8) + 8) % 8;
      chi = (r % 2 == 0) ? 0 : ((r == 1 || r == 7) ? 1 : -1);
    } else {
      int64_t a = ((D % p) + p) % p;
      if (a == 0) {
        chi = 0;
      } else {
        // Euler's criterion
        int64_t r = 1, b = a, k = (p - 1) / 2;
        while (k) {
          if (k & 1) r = (__int128)r * b % p;
          b = (__int128)b * b % p;
          k >>= 1;
        }
        chi = (r == 1) ? 1 : -1;
      }
    }
    for (int i = 0; i < e; ++i) result *= chi;
  }
  return result;
}

int64_t field_discriminant(int64_t d) { return (d % 4 == 3) ? -d : -4 * d; }

double bianchi_covolume(int64_t d) {
  const int64_t D = field_discriminant(d), N = -D;
  double s = 0;
  for (int64_t a = 1; a < N; ++a) {
    int chi = kronecker_symbol(D, a);
    if (chi) s += chi * clausen_cl2(2 * std::numbers::pi * (double)a / (double)N);
  }
  return (double)N / 24.0 * s;
}

namespace {

// Volume above the unit-free hemisphere of radius R over the sector swept from the
// foot of the perpendicular (distance R cos delta) to signed angle alpha.
double sector(double delta, double alpha) {
  return 0.25 * (lobachevsky(delta + alpha) - lobachevsky(delta - alpha) +
                 2 * lobachevsky(std::numbers::pi / 2 - alpha));
}

}  // namespace

double domain_volume(const DirichletDomain& D) {
  const double sd = std::sqrt((double)D.d);
  const LorentzMatrix L = psl_to_lorentz(D.conjugator);
  const LorentzMatrix Li = L.inverse();
  double Ld[4][4], Lid[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Ld[i][j] = L.at(i, j).get_d();
      Lid[i][j] = Li.at(i, j).get_d();
    }
  std::vector<std::array<double, 2>> proj(D.poly.vertices().size());
  std::vector<bool> at_infinity(proj.size(), false);
  for (size_t i = 0; i < proj.size(); ++i) {
    const Vec3& v = D.poly.vertices()[i];
    double h[4] = {1, v[0].get_d(), v[1].get_d(), v[2].get_d()};
    double x[4] = {0, 0, 0, 0};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) x[r] += Ld[r][c] * h[c];
    double den = x[0] - x[1];
    if (std::abs(den) < 1e-12 * std::abs(x[0])) {
      at_infinity[i] = true;
      continue;
    }
    proj[i] = {x[2] / den, sd * x[3] / den};
  }
  double vol = 0;
  for (const PolyFace& F : D.poly.faces()) {
    double phi[4] = {-F.plane.c0.get_d(), F.plane.c1.get_d(), F.plane.c2.get_d(), F.plane.c3.get_d()};
    double ps[4] = {0, 0, 0, 0};
    for (int c = 0; c < 4; ++c)
      for (int r = 0; r < 4; ++r) ps[c] += phi[r] * Lid[r][c];
    double alpha = ps[0] + ps[1];
    double scale = std::abs(ps[0]) + std::abs(ps[1]) + std::abs(ps[2]) + std::abs(ps[3]);
    if (std::abs(alpha) < 1e-12 * scale) continue;  // vertical face
    bool skip = false;
    for (int v : F.cycle) skip = skip || at_infinity[v];
    if (skip) continue;
    double uc = -ps[2] / alpha, vc = -(ps[3] / sd) / alpha;
    double R2 = uc * uc + vc * vc - (ps[0] - ps[1]) / alpha;
    double R = std::sqrt(std::max(R2, 0.0));
    std::vector<std::array<double, 2>> poly;
    for (int v : F.cycle) poly.push_back({proj[v][0] - uc, proj[v][1] - vc});
    double area = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
      const auto& a = poly[i];
      const auto& b = poly[(i + 1) % poly.size()];
      area += a[0] * b[1] - a[1] * b[0];
    }
    double sign = area >= 0 ? 1 : -1;
    double face_vol = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
      const auto& A = poly[i];
      const auto& B = poly[(i + 1) % poly.size()];
      double ex = B[0] - A[0], ey = B[1] - A[1];
      double len2 = ex * ex + ey * ey;
      if (len2 == 0) continue;
      double t = -(A[0] * ex + A[1] * ey) / len2;
      double fx = A[0] + t * ex, fy = A[1] + t * ey;
      double h = std::sqrt(fx * fx + fy * fy);
      if (h < 1e-14 * (R + 1)) continue;
      double delta = std::acos(std::min(1.0, h / R));
      auto ang = [&](const std::array<double, 2>& P) {
        return std::atan2(fx * P[1] - fy * P[0], fx * P[0] + fy * P[1]);
      };
      face_vol += sector(delta, ang(B)) - sector(delta, ang(A));
    }
    vol += sign * face_vol;
  }
  return vol;
}

}  // namespace bianchi
