#include "bianchi/errors.hpp"
#include "bianchi/homology.hpp"
#include "bianchi/simplify.hpp"
#include "bianchi/triangulation.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bianchi;
using testing::domain;
using testing::ideal;

namespace {

size_t copies(const Triangulation& T) { return T.size() / (size_t)T.per_copy; }

AbelianGroup Zn(int n) { return AbelianGroup::from_cyclic(n, {}); }

}  // namespace

TEST_SUITE("triangulation") {
  TEST_CASE("principal congruence builds") {
    Triangulation T = build_principal(domain(2), ideal(2, "1+s"));
    CHECK(copies(T) == 12);
    CHECK(classify_vertices(T).cusps.count == 4);
    CHECK_NOTHROW(check_gluing(T));

    Triangulation U = build_principal(domain(1), ideal(1, "2+i"));
    CHECK(copies(U) == 60);
    CHECK(classify_vertices(U).cusps.count == 6);
    CHECK_FALSE(detect_orbifold(U, domain(1)));

    Triangulation one = build_principal(domain(1), ideal(1, "1"));
    CHECK(copies(one) == 1);
    CHECK(build_gamma1(domain(1), ideal(1, "1")).size() == domain(1).size());
  }

  TEST_CASE("gamma1 copies") {
    CHECK(copies(build_gamma1(domain(2), ideal(2, "1+s"))) == 12 / 3);
    CHECK(copies(build_gamma1(domain(1), ideal(1, "3"))) == 360 / 9);
  }

  TEST_CASE("budget") {
    CHECK_THROWS_AS(build_principal(domain(1), ideal(1, "3"), 1000), Error);
  }

  TEST_CASE("orbifolds") {
    CHECK(detect_orbifold(build_principal(domain(1), ideal(1, "1+i")), domain(1)));
    CHECK(detect_orbifold(build_principal(domain(3), ideal(3, "(3+s)/2")), domain(3)));
    CHECK_FALSE(detect_orbifold(build_principal(domain(2), ideal(2, "1+s")), domain(2)));
  }

  TEST_CASE("json round trip") {
    Triangulation T = build_principal(domain(7), ideal(7, "(1+s)/2"));
    Triangulation U = triangulation_from_json(triangulation_to_json(T));
    CHECK(triangulation_to_json(U) == triangulation_to_json(T));
    CHECK(U.size() == T.size());
  }
}

TEST_SUITE("simplify") {
  TEST_CASE("coarsening") {
    Triangulation T = build_principal(domain(2), ideal(2, "1+s"));
    Triangulation C = coarsen_barycentric(T);
    CHECK(C.size() == T.size() / 4);
    CHECK_NOTHROW(check_gluing(C));
    CHECK_THROWS_AS(coarsen_barycentric(C), Error);
  }

  TEST_CASE("collapse removes finite vertices") {
    Triangulation T = build_principal(domain(1), ideal(1, "2"));
    SimplifyStats st;
    Triangulation S = simplify(T, &st);
    VertexReport vr = classify_vertices(S);
    CHECK(vr.finite_vertices == 0);
    CHECK(st.finite_vertices == 0);
    CHECK(vr.cusps.count == 6);
    CHECK(S.size() < st.coarsened);

    CollapseStats cs;
    Triangulation again = collapse_edges(S, &cs);
    CHECK(again.size() == S.size());
    CHECK(cs.collapses == 0);
  }
}

TEST_SUITE("homology") {
  TEST_CASE("smith normal form") {
    SparseIntMatrix I3(3, 3);
    for (int i = 0; i < 3; ++i) I3.add(i, i, 1);
    SnfResult r = smith_normal_form(I3);
    CHECK(r.rank == 3);
    CHECK(r.divisors.empty());

    SnfResult a = smith_normal_form(SparseIntMatrix::from_dense({{2, 4}, {6, 8}}));
    CHECK(a.rank == 2);
    CHECK(a.divisors == std::vector<mpz_class>{2, 4});

    CHECK(smith_normal_form(SparseIntMatrix::from_dense({{1, 0}, {0, 0}})).rank == 1);
    CHECK(smith_normal_form(SparseIntMatrix(4, 5)).rank == 0);
  }

  TEST_CASE("boundary maps") {
    Triangulation T = build_principal(domain(2), ideal(2, "1+s"));
    ChainComplex C = boundary_matrices(T);
    CHECK(C.d1.multiply(C.d2).is_zero());
    CHECK(smith_normal_form(C.d1).rank == C.vertices - 1);
    for (int s : orient(T)) CHECK((s == 1 || s == -1));
  }

  TEST_CASE("abelian group forms") {
    CHECK(AbelianGroup::parse("Z^2 + Z/2 + Z/3").str() == "Z^2 + Z/6");
    CHECK(AbelianGroup::parse("0").trivial());
    CHECK(Zn(4).str() == "Z^4");
    CHECK(direct_sum(AbelianGroup::parse("Z/4"), AbelianGroup::parse("Z/6")).str() == "Z/2 + Z/12");
  }

  TEST_CASE("H1 of link complements") {
    auto h = [](int64_t d, const std::string& lit) {
      return h1_with_quotient(simplify(build_principal(domain(d), ideal(d, lit))));
    };
    HomologyResult a = h(2, "1+s");
    CHECK(a.quotient.trivial());
    CHECK(a.h1 == Zn(4));
    HomologyResult b = h(1, "3");
    CHECK(b.quotient.trivial());
    CHECK(b.cusps == 20);
    CHECK(b.h1 == Zn(20));
    HomologyResult c = h(2, "2");
    CHECK(c.quotient.trivial());
    CHECK(c.cusps == 12);
  }

  TEST_CASE("cover obstructions") {
    CHECK(principal_cover_degree(ideal(5, "4+2*s"), ideal(5, "2")) == 324);
    CHECK(cover_obstruction(ObstructionKind::PrincipalCover, {std::nullopt, 324}) == Verdict::Excluded);
    CHECK(cover_obstruction(ObstructionKind::Gamma1Degree, {std::nullopt, 31}) == Verdict::Excluded);
    CHECK(cover_obstruction(ObstructionKind::MinCoverDegree, {mpz_class(40), 31}) == Verdict::Excluded);
    CHECK(cover_obstruction(ObstructionKind::MinCoverDegree, {mpz_class(31), 31}) == Verdict::Inconclusive);
    CHECK(cover_obstruction(ObstructionKind::MinCoverDegree, {mpz_class(1), 2}) == Verdict::Inconclusive);
    CHECK_THROWS_AS(principal_cover_degree(ideal(5, "2"), ideal(5, "4+2*s")), Error);
  }
}
