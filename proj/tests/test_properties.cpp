#include <algorithm>
#include <deque>
#include <numeric>
#include <random>

#include "bianchi/certificate.hpp"
#include "bianchi/errors.hpp"
#include "bianchi/geometry.hpp"
#include "bianchi/homology.hpp"
#include "bianchi/simplify.hpp"
#include "bianchi/triangulation.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bianchi;
using testing::domain;
using testing::ideal;

namespace {

using Dense = std::vector<std::vector<mpz_class>>;

mpz_class bareiss_det(Dense a) {
  const size_t n = a.size();
  mpz_class prev = 1;
  int sign = 1;
  for (size_t k = 0; k < n; ++k) {
    size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

void subsets(size_t n, size_t k, std::vector<std::vector<size_t>>& out) {
  std::vector<size_t> s(k);
  std::iota(s.begin(), s.end(), 0);
  while (true) {
    out.push_back(s);
    size_t i = k;
    while (i > 0 && s[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++s[i - 1];
    for (size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

// Elementary divisors as quotients of gcds of k x k minors.
SnfResult minors_oracle(const Dense& a) {
  const size_t r = a.size(), c = a[0].size();
  SnfResult res;
  mpz_class prev = 1;
  for (size_t k = 1; k <= std::min(r, c); ++k) {
    std::vector<std::vector<size_t>> rs, cs;
    subsets(r, k, rs);
    subsets(c, k, cs);
    mpz_class g = 0;
    for (const auto& ri : rs)
      for (const auto& ci : cs) {
        Dense m(k, std::vector<mpz_class>(k));
        for (size_t i = 0; i < k; ++i)
          for (size_t j = 0; j < k; ++j) m[i][j] = a[ri[i]][ci[j]];
        mpz_class d = bareiss_det(m);
        g = gcd(g, d);
      }
    if (g == 0) break;
    res.rank = (int)k;
    mpz_class q = g / prev;
    if (q > 1) res.divisors.push_back(q);
    prev = g;
  }
  return res;
}

Triangulation bfs_reorder(const Triangulation& T, uint64_t seed) {
  const size_t n = T.size();
  std::mt19937_64 rng(seed);
  std::vector<int> order, pos(n, -1);
  std::vector<size_t> starts(n);
  std::iota(starts.begin(), starts.end(), 0);
  std::shuffle(starts.begin(), starts.end(), rng);
  for (size_t s : starts) {
    if (pos[s] >= 0) continue;
    std::deque<int> q{(int)s};
    pos[s] = (int)order.size();
    order.push_back((int)s);
    while (!q.empty()) {
      int t = q.front();
      q.pop_front();
      for (int f = 0; f < 4; ++f) {
        int u = T.tets[(size_t)t].nb[f];
        if (u >= 0 && pos[(size_t)u] < 0) {
          pos[(size_t)u] = (int)order.size();
          order.push_back(u);
          q.push_back(u);
        }
      }
    }
  }
  Triangulation R;
  R.tets.resize(n);
  for (size_t i = 0; i < n; ++i) {
    Tetrahedron t = T.tets[(size_t)order[i]];
    for (int f = 0; f < 4; ++f)
      if (t.nb[f] >= 0) t.nb[f] = pos[(size_t)t.nb[f]];
    R.tets[i] = t;
  }
  return R;
}

struct Case {
  int64_t d;
  const char* ideal;
  bool gamma1;
};

const Case kCases[] = {{2, "1+s", false}, {1, "2", false},  {1, "2+i", false}, {7, "(1+s)/2", false},
                       {2, "2", false},   {1, "2+i", true}, {2, "2+s", true},  {15, "[2, (1+s)/2]", false},
                       {7, "(3+s)/2", false}};

Triangulation build_case(const Case& c) {
  QuadIdeal I = ideal(c.d, c.ideal);
  return c.gamma1 ? build_gamma1(domain(c.d), I) : build_principal(domain(c.d), I);
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("SNF agrees with the gcd-of-minors oracle") {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> entry(-10, 10), dim(1, 6), coin(0, 3);
    for (int trial = 0; trial < 200; ++trial) {
      int r = dim(rng), c = dim(rng);
      Dense a(r, std::vector<mpz_class>(c));
      if (coin(rng) == 0 && r > 1) {
        // Rank-deficient: product of thin factors.
        int k = std::max(1, std::min(r, c) - 1);
        Dense x(r, std::vector<mpz_class>(k)), y(k, std::vector<mpz_class>(c));
        for (auto& row : x)
          for (auto& v : row) v = entry(rng) % 4;
        for (auto& row : y)
          for (auto& v : row) v = entry(rng) % 4;
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < c; ++j)
            for (int l = 0; l < k; ++l) a[i][j] += x[i][l] * y[l][j];
      } else {
        for (auto& row : a)
          for (auto& v : row) v = coin(rng) == 0 ? 0 : entry(rng);
      }
      SnfResult got = smith_normal_form(SparseIntMatrix::from_dense(a));
      SnfResult want = minors_oracle(a);
      CAPTURE(trial);
      CHECK(got.rank == want.rank);
      CHECK(got.divisors == want.divisors);
    }
  }

  TEST_CASE("dense diagonal matches sparse SNF") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> entry(-6, 6);
    for (int trial = 0; trial < 40; ++trial) {
      Dense a(8, std::vector<mpz_class>(8));
      for (auto& row : a)
        for (auto& v : row) v = entry(rng);
      std::vector<mpz_class> diag = dense_smith_diagonal(a);
      SnfResult s = smith_normal_form(SparseIntMatrix::from_dense(a));
      CHECK((int)diag.size() == s.rank);
      std::vector<mpz_class> big;
      for (const auto& x : diag)
        if (abs(x) > 1) big.push_back(abs(x));
      CHECK(big == s.divisors);
    }
  }

  TEST_CASE("Euler characteristic and vertex links") {
    for (const Case& c : kCases) {
      CAPTURE(c.d);
      CAPTURE(c.ideal);
      CAPTURE(c.gamma1);
      Triangulation T = build_case(c);
      REQUIRE_FALSE(detect_orbifold(T, domain(c.d)));
      VertexReport a = classify_vertices(T);
      CHECK(a.links_ok);
      CHECK(a.euler == a.cusps.count);
      Triangulation S = simplify(T);
      VertexReport b = classify_vertices(S);
      CHECK(b.links_ok);
      CHECK(b.euler == b.cusps.count);
      CHECK(b.cusps.count == a.cusps.count);
      CHECK(b.finite_vertices == 0);
    }
  }

  TEST_CASE("H1 is invariant under simplification and reordering") {
    uint64_t seed = 1;
    for (const Case& c : kCases) {
      CAPTURE(c.d);
      CAPTURE(c.ideal);
      Triangulation T = build_case(c);
      HomologyResult full = h1_with_quotient(T);
      Triangulation C = coarsen_barycentric(T);
      Triangulation S = simplify(T);
      for (const Triangulation* X : {&C, &S}) {
        HomologyResult h = h1_with_quotient(*X);
        CHECK(h.quotient == full.quotient);
        CHECK(h.h1 == full.h1);
        CHECK(h.cusps == full.cusps);
      }
      HomologyResult r1 = h1_with_quotient(bfs_reorder(S, seed++));
      CHECK(r1.h1 == full.h1);
      Triangulation R = bfs_reorder(C, seed++);
      CHECK_NOTHROW(check_gluing(R));
      HomologyResult r2 = h1_with_quotient(R);
      CHECK(r2.quotient == full.quotient);
      CHECK(r2.h1 == full.h1);
      HomologyResult r3 = h1_with_quotient(simplify(R));
      CHECK(r3.h1 == full.h1);
      CHECK(classify_vertices(simplify(R)).finite_vertices == 0);
    }
  }

  TEST_CASE("Lorentz map is a homomorphism preserving the form") {
    std::mt19937_64 rng(99);
    for (int64_t d : bundled_bianchi_d()) {
      CAPTURE(d);
      BianchiGroup G = bianchi_data(d);
      std::uniform_int_distribution<int> gen(1, G.presentation.ngens()), len(0, 6), sign(0, 1);
      auto random_word = [&] {
        Word w(len(rng));
        for (int& l : w) l = sign(rng) ? gen(rng) : -gen(rng);
        return w;
      };
      int bad = 0;
      for (int i = 0; i < 1000; ++i) {
        Word x = random_word(), y = random_word();
        ProjMatrix mx = word_matrix(G, x), my = word_matrix(G, y);
        LorentzMatrix lx = psl_to_lorentz(mx), ly = psl_to_lorentz(my);
        LorentzMatrix lxy = psl_to_lorentz(word_matrix(G, word_concat(x, y)));
        if (!(lxy == lx * ly) || !lxy.preserves_form() || !(mx * my).proj_equal(word_matrix(G, word_concat(x, y))))
          ++bad;
      }
      CHECK(bad == 0);
    }
  }

  TEST_CASE("coset table invariants") {
    Presentation P;
    P.gens = {"a", "b"};
    P.relators = {parse_word("a^2", P.gens), parse_word("b^3", P.gens), parse_word("(a*b)^5", P.gens)};
    struct Sub {
      const char* w;
      int index;
    };
    for (Sub s : {Sub{"Id", 60}, Sub{"a", 30}, Sub{"b", 20}, Sub{"a*b", 12}, Sub{"b*a*b^-1*a", 0}}) {
      std::vector<Word> H;
      Word w = parse_word(s.w, P.gens);
      if (!w.empty()) H.push_back(w);
      CosetTable T = todd_coxeter(P, H);
      if (s.index) CHECK(T.index() == s.index);
      CHECK(verify_coset_table(T, P, H));
      for (int c = 0; c < T.index(); ++c) {
        for (int g = 1; g <= P.ngens(); ++g) CHECK(T.act(T.act(c, g), -g) == c);
        for (const Word& r : P.relators) CHECK(T.trace(c, r) == c);
      }
      SchreierResult R = reidemeister_schreier(P, T);
      CHECK(R.presentation.ngens() == T.index() * (P.ngens() - 1) + 1);
    }
    for (int64_t d : {1, 2, 7, 11}) {
      BianchiGroup G = bianchi_data(d);
      for (const QuadIdeal& I : ideals_up_to_norm(d, 6)) {
        if (I.is_unit()) continue;
        std::vector<PeripheralTriple> ts;
        for (int c = 0; c < G.cusp_classes(); ++c) ts.push_back(find_peripheral_triple(G, I, c));
        for (int c = 0; c < G.cusp_classes(); ++c) CHECK(validate_peripheral_triple(G, I, c, ts[(size_t)c]));
        CosetTable T = todd_coxeter(build_BI(G, ts), {}, 200000);
        CHECK((uint64_t)T.index() >= psl_order(I));
        CHECK((uint64_t)T.index() % psl_order(I) == 0);
      }
    }
  }

  TEST_CASE("certificate mutations") {
    std::mt19937_64 rng(5);
    for (const char* f : {"d2_1ps2.json", "d15_2w.json", "d11_3ps11.json", "d15_1ps15.json", "d7_1ps7.json"}) {
      CAPTURE(f);
      LinkCertificate c = load_certificate(testing::cert_path(f));
      FillingLists L = expand_certificate(c);
      c.fillings = L;
      c.expand.reset();
      c.symmetry.reset();
      REQUIRE(verify_link(c).verdict.find("-Link") != std::string::npos);
      auto kind = [](const LinkCertificate& m) {
        try {
          verify_link(m);
        } catch (const Error& e) {
          return e.kind();
        }
        return ErrorKind::UsageError;
      };
      for (int trial = 0; trial < 3; ++trial) {
        size_t cls = rng() % L.size();
        if (L[cls].empty()) continue;
        size_t j = rng() % L[cls].size();
        LinkCertificate drop = c;
        drop.fillings[cls].erase(drop.fillings[cls].begin() + (long)j);
        ErrorKind k = kind(drop);
        CHECK((k == ErrorKind::Test2Failed || k == ErrorKind::Test3Failed));
        LinkCertificate dup = c;
        dup.fillings[cls].push_back(dup.fillings[cls][j]);
        CHECK(kind(dup) == ErrorKind::Test3Failed);
        LinkCertificate ord = c;
        ord.expected_order += 1 + rng() % 5;
        CHECK(kind(ord) == ErrorKind::Test1Failed);
      }
    }
  }

  TEST_CASE("ideal arithmetic") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int64_t> coef(-20, 20);
    for (int64_t d : {1, 2, 3, 5, 7, 15}) {
      for (const QuadIdeal& I : ideals_up_to_norm(d, 30)) {
        for (int i = 0; i < 10; ++i) {
          QuadInt x(d, coef(rng), coef(rng));
          QuadInt r = reduce_mod_ideal(x, I);
          CHECK(I.contains(x - r));
          CHECK(reduce_mod_ideal(r, I) == r);
        }
        QuadIdeal prod = ideal_from_generators(d, {QuadInt(d, 1)});
        for (const auto& [P, e] : factor_ideal(I))
          for (int k = 0; k < e; ++k) prod = ideal_mul(prod, P);
        CHECK(prod == I);
        CHECK(ideal_conj(ideal_conj(I)) == I);
      }
    }
  }
}
