#include <set>

#include "bianchi/bianchi_data.hpp"
#include "bianchi/errors.hpp"
#include "bianchi/ring.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bianchi;
using testing::ideal;

TEST_SUITE("ring") {
  TEST_CASE("ideal normal form") {
    QuadIdeal I = ideal_from_generators(2, {QuadInt(2, 1, 1)});
    CHECK(I.str() == "(3,1,1)");
    CHECK(ideal(2, "1+3*s").str() == "(19,13,1)");
    CHECK(ideal_from_generators(1, {QuadInt(1, 1)}).is_unit());
    CHECK(QuadIdeal::from_triple(2, 19, 6, -1) == ideal(2, "1+3*s"));
    CHECK_THROWS_AS(ideal_from_generators(1, {QuadInt(1, 0)}), Error);
  }

  TEST_CASE("literal syntax") {
    CHECK(ideal(7, "(1+s)/2") == ideal(7, "w"));
    CHECK(ideal(15, "[2, (1+s)/2]").norm() == 2);
    CHECK(ideal(2, "d=2 gens=[1+w, 3]") == ideal(2, "1+s"));
    CHECK(ideal(1, "2+i") == ideal(1, "2+s"));
    CHECK_THROWS_AS(parse_ideal_literal(2, "1+"), Error);
    CHECK_THROWS_AS(parse_ideal_literal(2, "[1+s"), Error);
  }

  TEST_CASE("reduction") {
    QuadIdeal I = QuadIdeal::from_triple(2, 3, 1, 1);
    CHECK(reduce_mod_ideal(QuadInt(2, 4), I) == QuadInt(2, 1));
    CHECK(reduce_mod_ideal(QuadInt(2, 0, 1), I) == QuadInt(2, 2));
    CHECK(reduce_mod_ideal(QuadInt(2, 0), I) == QuadInt(2, 0));
  }

  TEST_CASE("factorization") {
    auto f = factor_ideal(ideal(1, "2"));
    REQUIRE(f.size() == 1);
    CHECK(f[0].first == ideal(1, "1+i"));
    CHECK(f[0].second == 2);
    for (int64_t d : {2, 7}) {
      auto g = factor_ideal(ideal(d, d == 2 ? "3" : "2"));
      REQUIRE(g.size() == 2);
      CHECK(g[0].second == 1);
      CHECK(g[1].second == 1);
      CHECK(g[0].first.norm() == g[1].first.norm());
      CHECK(ideal_conj(g[0].first) == g[1].first);
    }
  }

  TEST_CASE("psl order") {
    CHECK(psl_order(ideal(1, "2")) == 48);
    CHECK(psl_order(ideal(7, "(1+s)/2")) == 6);
    CHECK(psl_order(ideal(2, "3")) == 288);
    CHECK(psl_order(ideal(1, "3")) == 360);
  }

  TEST_CASE("enumerate_psl") {
    auto size = [](int64_t d, const std::string& lit) {
      return enumerate_psl(ideal(d, lit), bianchi_data(d).matrices).size();
    };
    CHECK(size(2, "1+s") == 12);
    CHECK(size(1, "1+i") == 6);
    CHECK(size(5, "[3, 1+s]") == 12);
  }

  TEST_CASE("canonical residues") {
    QuadIdeal I = QuadIdeal::from_triple(2, 3, 1, 1);
    ProjMatrix id = ProjMatrix::identity(2);
    CHECK(proj_canonicalize(id, I) == proj_canonicalize(id.neg(), I));
    ProjMatrix t3(QuadInt(2, 1), QuadInt(2, 3), QuadInt(2, 0), QuadInt(2, 1));
    CHECK(proj_canonicalize(t3, I) == proj_canonicalize(id, I));
    PslQuotient Q(I);
    CHECK(Q.key(t3) == Q.identity());
  }

  TEST_CASE("ideal lattice enumeration") {
    std::set<std::string> seen;
    for (const QuadIdeal& I : ideals_up_to_norm(1, 10)) {
      CHECK(I.contains(QuadInt(1, I.n)));
      CHECK(seen.insert(I.str()).second);
    }
    // 1, 1+i, 2, 2+-i, 2+2i, 3, 3+-i
    CHECK(seen.size() == 1 + 1 + 1 + 2 + 1 + 1 + 2);
  }
}
