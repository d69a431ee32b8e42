#include "bianchi/bianchi_data.hpp"
#include "bianchi/errors.hpp"
#include "bianchi/fpgroups.hpp"
#include "bianchi/homology.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bianchi;
using testing::ideal;

namespace {

Presentation pres(std::vector<std::string> gens, const std::vector<std::string>& rels) {
  Presentation P;
  P.gens = std::move(gens);
  for (const auto& r : rels) P.relators.push_back(parse_word(r, P.gens));
  return P;
}

uint64_t bi_order(int64_t d, const std::vector<PeripheralTriple>& ts) {
  return (uint64_t)todd_coxeter(build_BI(d, ts), {}).index();
}

// Exponent-sum matrix of the relators.
AbelianGroup relator_matrix_snf(const Presentation& P) {
  SparseIntMatrix M((int)P.relators.size(), P.ngens());
  for (size_t r = 0; r < P.relators.size(); ++r)
    for (int l : P.relators[r]) M.add((int)r, std::abs(l) - 1, l > 0 ? 1 : -1);
  M.normalize();
  SnfResult s = smith_normal_form(M);
  return AbelianGroup::from_cyclic(P.ngens() - s.rank, s.divisors);
}

}  // namespace

TEST_SUITE("fpgroups") {
  TEST_CASE("word parsing") {
    std::vector<std::string> g{"a", "t", "u"};
    CHECK(parse_word("a^2", g) == Word{1, 1});
    CHECK(parse_word("[t,u]", g) == Word{-2, -3, 2, 3});
    CHECK(parse_word("(t,u)", g) == parse_word("[t,u]", g));
    CHECK(parse_word("(t*a)^-2", g) == Word{-1, -2, -1, -2});
    CHECK(parse_word("Id", g).empty());
    CHECK(format_word(parse_word("t^3*u^-1", g), g) == "t^3*u^-1");
    CHECK_THROWS_AS(parse_word("x", g), Error);
    CHECK_THROWS_AS(parse_word("(a*t", g), Error);
  }

  TEST_CASE("word algebra") {
    CHECK(free_reduce({1, 2, -2, -1, 3}) == Word{3});
    CHECK(cyclic_reduce({-1, 2, 3, 1}) == Word{2, 3});
    CHECK(word_inverse({1, -2}) == Word{2, -1});
    CHECK(word_pow({1, 2}, -2) == Word{-2, -1, -2, -1});
  }

  TEST_CASE("bundled presentations") {
    BianchiGroup G2 = bianchi_data(2);
    CHECK(G2.presentation.gens == std::vector<std::string>{"a", "t", "u"});
    for (const char* r : {"a^2", "(t*a)^3", "(a*u^-1*a*u)^2", "[t,u]"}) {
      Word w = G2.parse(r);
      CHECK(word_matrix(G2, w).is_pm_identity());
    }
    BianchiGroup G23 = bianchi_data(23);
    CHECK(G23.presentation.ngens() == 5);
    CHECK(G23.cusp_classes() == 3);
    CHECK_THROWS_AS(bianchi_data(13), Error);
    for (int64_t d : bundled_bianchi_d()) {
      BianchiGroup G = bianchi_data(d);
      for (const Word& r : G.presentation.relators) CHECK(word_matrix(G, r).is_pm_identity());
    }
  }

  TEST_CASE("peripheral triples") {
    QuadIdeal I15 = ideal(15, "[2, (1+s)/2]");
    CHECK(validate_peripheral_triple(15, I15, 0, {2, 0, 1}));
    CHECK_FALSE(validate_peripheral_triple(15, I15, 0, {1, 0, 1}));
    CHECK(validate_peripheral_triple(2, ideal(2, "1+3*s"), 0, {19, 6, -1}));
    BianchiGroup G = bianchi_data(7);
    PeripheralTriple t = find_peripheral_triple(G, ideal(7, "3"), 0);
    CHECK(t.n == 3);
    CHECK(t.k == 0);
    CHECK(t.l == 3);
  }

  TEST_CASE("coset enumeration") {
    CHECK(todd_coxeter(pres({"x"}, {"x^3"}), {Word{1}}).index() == 1);
    CHECK(todd_coxeter(pres({"x"}, {"x^3"}), {}).index() == 3);
    CHECK(todd_coxeter(pres({"a", "b"}, {"a^2", "b^3", "(a*b)^5"}), {}).index() == 60);
    CHECK_THROWS_AS(todd_coxeter(pres({"x", "y"}, {}), {}, 1000), Error);
    CHECK(bi_order(2, {{3, 1, 1}}) == 12);
    CHECK(bi_order(7, {{3, 0, 3}}) == 1080);
    CHECK(bi_order(5, {{2, 1, 1}}) == 12);
  }

  TEST_CASE("abelian invariants") {
    CHECK(abelian_invariants(pres({"a", "b"}, {"[a,b]"})).str() == "Z^2");
    CHECK(abelian_invariants(pres({"x", "y"}, {"x^2", "y^3"})).str() == "Z/6");
    for (int64_t d : {1, 2, 7}) {
      const Presentation& P = bianchi_data(d).presentation;
      CHECK(abelian_invariants(P) == relator_matrix_snf(P));
    }
  }

  TEST_CASE("Reidemeister-Schreier") {
    Presentation P = pres({"a", "b"}, {"a^2", "b^3", "(a*b)^5"});
    CosetTable one = todd_coxeter(P, {Word{1}, Word{2}});
    CHECK(one.index() == 1);
    CHECK(abelian_invariants(reidemeister_schreier(P, one).presentation) == abelian_invariants(P));

    Presentation F = pres({"x"}, {});
    Presentation Fq = pres({"x"}, {"x^2"});
    SchreierResult R = reidemeister_schreier(F, todd_coxeter(Fq, {}));
    CHECK(abelian_invariants(R.presentation).str() == "Z");

    Presentation Z = pres({"x"}, {});
    CosetTable T5 = todd_coxeter(pres({"x"}, {"x^5"}), {});
    CHECK(abelian_invariants(reidemeister_schreier(Z, T5).presentation).str() == "Z");

    BianchiGroup G = bianchi_data(2);
    CosetTable T = todd_coxeter(build_BI(G, {{3, 1, 1}}), {});
    REQUIRE(T.index() == 12);
    SchreierResult N = reidemeister_schreier(G.presentation, T);
    CHECK(abelian_invariants(N.presentation).str() == "Z^4");
    Presentation S = tietze_simplify(N.presentation);
    CHECK(abelian_invariants(S).str() == "Z^4");
    CHECK(S.ngens() <= N.presentation.ngens());
  }
}
