#define DOCTEST_CONFIG_IMPLEMENT
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include "bianchi/certificate.hpp"
#include "bianchi/domain.hpp"
#include "bianchi/errors.hpp"
#include "bianchi/homology.hpp"
#include "bianchi/simplify.hpp"
#include "bianchi/triangulation.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bianchi;
using testing::ideal;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream log;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) log << "; ";
      log << what;
      ok = false;
    }
  }
};

int64_t field_disc(int64_t d) { return d % 4 == 3 ? -d : -4 * d; }

// Reduced positive definite forms of discriminant D.
int class_number(int64_t D) {
  int h = 0;
  for (int64_t a = 1; 3 * a * a <= -D; ++a)
    for (int64_t b = -a + 1; b <= a; ++b) {
      int64_t num = b * b - D;
      if (num % (4 * a)) continue;
      int64_t c = num / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      ++h;
    }
  return h;
}

int jacobi(int64_t a, int64_t n) {
  a %= n;
  if (a < 0) a += n;
  int s = 1;
  while (a) {
    while (a % 2 == 0) {
      a /= 2;
      if (n % 8 == 3 || n % 8 == 5) s = -s;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) s = -s;
    a %= n;
  }
  return n == 1 ? s : 0;
}

int kronecker(int64_t D, int64_t n) {
  int s = 1;
  while (n % 2 == 0) {
    n /= 2;
    if (D % 2 == 0) return 0;
    int64_t m = ((D % 8) + 8) % 8;
    if (m == 3 || m == 5) s = -s;
  }
  return n == 1 ? s : s * jacobi(D, n);
}

double trigamma(double x) {
  double acc = 0;
  while (x < 20) {
    acc += 1 / (x * x);
    x += 1;
  }
  double x2 = x * x;
  return acc + 1 / x + 1 / (2 * x2) + 1 / (6 * x2 * x) - 1 / (30 * x2 * x2 * x) + 1 / (42 * x2 * x2 * x2 * x) -
         1 / (30 * x2 * x2 * x2 * x2 * x);
}

// |D|^{3/2} zeta_K(2) / (4 pi^2) with zeta_K(2) = zeta(2) L(2, chi_D).
double covolume_oracle(int64_t d) {
  const int64_t D = field_disc(d), m = -D;
  double L = 0;
  for (int64_t r = 1; r <= m; ++r) {
    int k = kronecker(D, r);
    if (k) L += k * trigamma((double)r / (double)m);
  }
  L /= (double)(m * m);
  return std::pow((double)m, 1.5) * L / 24.0;
}

bool pairings_exact(const DirichletDomain& D) {
  const LorentzMatrix Lc = psl_to_lorentz(D.conjugator);
  const LorentzMatrix Linv = Lc.inverse();
  const auto& faces = D.poly.faces();
  const auto& verts = D.poly.vertices();
  for (size_t f = 0; f < faces.size(); ++f) {
    int g = D.mate[f];
    if (g < 0 || D.mate[(size_t)g] != (int)f) return false;
    if (!D.face_matrix[(size_t)g].proj_equal(D.face_matrix[f].inverse())) return false;
    LorentzMatrix M = Linv * psl_to_lorentz(D.face_matrix[f]) * Lc;
    if (!M.preserves_form()) return false;
    std::set<Vec3> want, got;
    for (int v : faces[f].cycle) want.insert(verts[(size_t)v]);
    for (int v : faces[(size_t)g].cycle) {
      const Vec3& x = verts[(size_t)v];
      got.insert(klein_of(M.apply(Vec4{1, x[0], x[1], x[2]})));
    }
    if (want != got) return false;
  }
  return true;
}

size_t copies(const Triangulation& T) { return T.size() / (size_t)T.per_copy; }

AbelianGroup Zn(int n) { return AbelianGroup::from_cyclic(n, {}); }

void c1(Check& k) {
  for (int64_t d : {1, 2, 3, 7, 11}) {
    BianchiGroup G = bianchi_data(d);
    for (const QuadIdeal& I : ideals_up_to_norm(d, 13)) {
      if (I.is_unit()) continue;
      uint64_t f = psl_order(I), e = enumerate_psl(I, G.matrices).size();
      k.expect(f == e, "d=" + std::to_string(d) + " " + I.str() + ": formula " + std::to_string(f) + " vs " +
                           std::to_string(e));
    }
  }
  k.expect(psl_order(ideal(1, "2")) == 48, "(1,<2>) != 48");
  k.expect(psl_order(ideal(2, "3")) == 288, "(2,<3>) != 288");
  k.expect(psl_order(ideal(1, "3")) == 360, "(1,<3>) != 360");
  k.expect(psl_order(ideal(7, "(1+s)/2")) == 6, "(7,<w>) != 6");
}

void c2(Check& k) {
  k.expect(std::fabs(covolume_oracle(1) - 0.305322) < 1e-6, "oracle for d=1 is off");
  for (int64_t d : {1, 2, 3, 5, 7, 11, 15}) {
    const std::string tag = "d=" + std::to_string(d) + ": ";
    DirichletDomain D = verified_dirichlet_domain(d);
    int h = class_number(field_disc(d));
    k.expect(D.ideal_vertex_classes == h,
             tag + std::to_string(D.ideal_vertex_classes) + " cusp classes, h=" + std::to_string(h));
    k.expect(pairings_exact(D), tag + "face pairings");
    double want = covolume_oracle(d);
    k.expect(std::fabs(D.volume - want) < 1e-6, tag + "volume " + std::to_string(D.volume) + " vs " + std::to_string(want));
    FundamentalDomain F = barycentric_export(D);
    try {
      validate_domain(F);
    } catch (const Error& e) {
      k.expect(false, tag + e.detail());
    }
  }
}

void c3(Check& k) {
  FundamentalDomain F = load_or_compute_domain(2, "");
  Triangulation T = build_principal(F, ideal(2, "1+s"));
  k.expect(copies(T) == 12, "copies " + std::to_string(copies(T)));
  k.expect(!detect_orbifold(T, F), "reported orbifold");
  k.expect(classify_vertices(T).cusps.count == 4, "cusps");
  Triangulation S = simplify(T);
  k.expect(classify_vertices(S).finite_vertices == 0, "finite vertices remain");
  HomologyResult h = h1_with_quotient(S);
  k.expect(h.quotient.trivial(), "quotient " + h.quotient.str());
  k.expect(h.h1 == Zn(4), "H1 " + h.h1.str());
  LinkReport r = verify_link(load_certificate(testing::cert_path("d2_1ps2.json")));
  k.expect(r.verdict == "4-Link", "certificate " + r.verdict);
}

void c4(Check& k) {
  k.expect(detect_orbifold(build_principal(testing::domain(1), ideal(1, "1+i")), testing::domain(1)), "(1,<1+i>)");
  k.expect(detect_orbifold(build_principal(testing::domain(3), ideal(3, "(3+s)/2")), testing::domain(3)),
           "(3,<(3+s)/2>)");
  Triangulation T = build_principal(testing::domain(1), ideal(1, "2+i"));
  k.expect(!detect_orbifold(T, testing::domain(1)), "(1,<2+i>) reported orbifold");
  k.expect(classify_vertices(T).cusps.count == 6, "(1,<2+i>) cusps");
}

void c5(Check& k) {
  auto run = [&](int64_t d, const std::string& lit, size_t want_copies, const AbelianGroup& q, int cusps) {
    Triangulation T = build_principal(testing::domain(d), ideal(d, lit));
    std::string tag = "(" + std::to_string(d) + "," + lit + "): ";
    if (want_copies) k.expect(copies(T) == want_copies, tag + "copies " + std::to_string(copies(T)));
    HomologyResult h = h1_with_quotient(simplify(T));
    k.expect(h.quotient == q, tag + "quotient " + h.quotient.str());
    k.expect(h.cusps == cusps, tag + "cusps " + std::to_string(h.cusps));
    k.expect(h.h1 == direct_sum(q, Zn(cusps)), tag + "h1 " + h.h1.str());
  };
  run(1, "3", 360, AbelianGroup{}, 20);
  run(2, "2", 0, AbelianGroup{}, 12);
  run(1, "3+3*i", 2160, Zn(5), 60);
}

void c6(Check& k) {
  auto order = [](int64_t d, const std::vector<PeripheralTriple>& ts) {
    return (uint64_t)todd_coxeter(build_BI(d, ts), {}).index();
  };
  uint64_t a = order(7, {{3, 0, 3}}), b = order(5, {{2, 1, 1}}), c = order(23, {{6, -2, 1}, {6, 1, 1}, {3, 0, 2}});
  k.expect(a == 1080, "B7(3,0,3) = " + std::to_string(a));
  k.expect(psl_order(ideal(7, "3")) == 360, "PSL(O7/<3>)");
  k.expect(b == 12, "B5(2,1,1) = " + std::to_string(b));
  k.expect(psl_order(ideal(5, "[2, 1+s]")) == 6, "PSL(O5/<2,1+s>)");
  k.expect(c == 288, "B23 = " + std::to_string(c));
  QuadIdeal I23 = ideal(23, "[6, (5-s)/2]");
  k.expect(psl_order(I23) == 72, "PSL(O23/I) = " + std::to_string(psl_order(I23)));
  BianchiGroup G23 = bianchi_data(23);
  PeripheralTriple t23[] = {{6, -2, 1}, {6, 1, 1}, {3, 0, 2}};
  for (int i = 0; i < 3; ++i) k.expect(validate_peripheral_triple(G23, I23, i, t23[i]), "d=23 triple invalid");
}

void c7(Check& k) {
  struct Case {
    const char* file;
    const char* verdict;
  };
  for (Case c : {Case{"d2_1ps2.json", "4-Link"}, Case{"d15_2w.json", "6-Link"}, Case{"d15_2w_expand.json", "6-Link"},
                 Case{"d11_3ps11.json", "12-Link"}, Case{"d15_1ps15.json", "12-Link"}, Case{"d7_1ps7.json", "3-Link"}}) {
    try {
      LinkCertificate cert = load_certificate(testing::cert_path(c.file));
      LinkReport r = verify_link(cert);
      k.expect(r.verdict == c.verdict, std::string(c.file) + " gave " + r.verdict);
      if (cert.link2) {
        Link2Report l2 = verify_link2(cert.d, cert.link2->pq, cert.link2->expected_order);
        k.expect(l2.cusps == 3, std::string(c.file) + " link2 cusps " + std::to_string(l2.cusps));
      }
    } catch (const Error& e) {
      k.expect(false, std::string(c.file) + ": " + error_kind_name(e.kind()) + " " + e.detail());
    }
  }
  auto fails_with = [](const LinkCertificate& c, ErrorKind want) {
    try {
      verify_link(c);
    } catch (const Error& e) {
      return e.kind() == want;
    }
    return false;
  };
  for (const char* f : {"d2_1ps2.json", "d15_2w.json", "d11_3ps11.json", "d15_1ps15.json", "d7_1ps7.json"}) {
    LinkCertificate c = load_certificate(testing::cert_path(f));
    c.fillings = expand_certificate(c);
    c.expand.reset();
    c.symmetry.reset();
    LinkCertificate wrong = c;
    wrong.expected_order += 1;
    k.expect(fails_with(wrong, ErrorKind::Test1Failed), std::string(f) + ": wrong order not Test1Failed");
    LinkCertificate dup = c;
    dup.fillings[0].push_back(dup.fillings[0][0]);
    k.expect(fails_with(dup, ErrorKind::Test3Failed), std::string(f) + ": duplicate cusp not Test3Failed");
  }
  LinkCertificate d2 = load_certificate(testing::cert_path("d2_1ps2.json"));
  d2.fillings[0].pop_back();
  k.expect(fails_with(d2, ErrorKind::Test2Failed), "dropped filling not Test2Failed");
}

void c8(Check& k) {
  mpz_class deg = principal_cover_degree(ideal(5, "4+2*s"), ideal(5, "2"));
  k.expect(psl_order(ideal(5, "4+2*s")) == 15552, "|PSL(O5/<4+2s>)|");
  k.expect(psl_order(ideal(5, "2")) == 48, "|PSL(O5/<2>)|");
  k.expect(deg == 324, "degree " + deg.get_str());
  k.expect(cover_obstruction(ObstructionKind::PrincipalCover, {std::nullopt, deg}) == Verdict::Excluded,
           "Example 5.4 not excluded");
  QuadIdeal I31 = ideal(31, "s");
  k.expect(I31.norm() == 31, "norm of <s> in O31");
  k.expect(cover_obstruction(ObstructionKind::Gamma1Degree, {std::nullopt, mpz_class((unsigned long)I31.norm())}) ==
               Verdict::Excluded,
           "(31,<s>) not excluded");
  k.expect(cover_obstruction(ObstructionKind::Gamma1Degree, {mpz_class(31), 31}) == Verdict::Inconclusive,
           "finite quotient of order N excluded");
  struct G1 {
    int64_t d;
    const char* lit;
    size_t copies;
  };
  for (G1 g : {G1{31, "s", 480}, G1{47, "5", 312}}) {
    QuadIdeal I = ideal(g.d, g.lit);
    uint64_t psl = enumerate_psl(I, bianchi_data(g.d).matrices).size();
    k.expect(psl % (uint64_t)I.norm() == 0 && psl / (uint64_t)I.norm() == g.copies,
             "index formula for d=" + std::to_string(g.d));
    Triangulation T = build_gamma1(testing::domain(g.d), I);
    k.expect(copies(T) == g.copies, "d=" + std::to_string(g.d) + " copies " + std::to_string(copies(T)));
  }
  // Small-scale Gamma_1 homology feeding the obstruction.
  Triangulation T = build_gamma1(testing::domain(1), ideal(1, "2+i"));
  k.expect(!detect_orbifold(T, testing::domain(1)), "Gamma1(1,<2+i>) reported orbifold");
  k.expect(copies(T) == 60 / 5, "Gamma1(1,<2+i>) copies");
  HomologyResult h = h1_with_quotient(simplify(T));
  std::optional<mpz_class> q;
  if (h.quotient.finite()) q = h.quotient.order();
  Verdict v = cover_obstruction(ObstructionKind::Gamma1Degree, {q, 5});
  bool expect_excluded = !q || *q > 5;
  k.expect((v == Verdict::Excluded) == expect_excluded, "Gamma1(1,<2+i>) verdict");
}

int c9() {
  doctest::Context ctx;
  ctx.setOption("test-suite", "properties");
  ctx.setOption("minimal", true);
  return ctx.run();
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria = {
      {"psl order formula vs enumeration", c1},
      {"Dirichlet domains", c2},
      {"end-to-end (2,<1+s>)", c3},
      {"orbifold detection", c4},
      {"homology values", c5},
      {"Todd-Coxeter orders", c6},
      {"certificate suite", c7},
      {"obstruction arithmetic", c8},
      {"property suites", [](Check& k) { k.expect(c9() == 0, "doctest properties suite failed"); }},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Check k;
    auto t0 = clock::now();
    try {
      criteria[i].second(k);
    } catch (const Error& e) {
      k.expect(false, std::string("uncaught ") + error_kind_name(e.kind()) + ": " + e.detail());
    } catch (const std::exception& e) {
      k.expect(false, std::string("uncaught ") + e.what());
    }
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    std::printf("criterion %zu: %s  %s (%.1fs)%s%s\n", i + 1, k.ok ? "PASS" : "FAIL", criteria[i].first, secs,
                k.ok ? "" : "  ", k.log.str().c_str());
    std::fflush(stdout);
    if (!k.ok) ++failed;
  }
  return failed ? 1 : 0;
}
