#include "bianchi/certificate.hpp"
#include "bianchi/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bianchi;
using testing::cert_path;

namespace {

ErrorKind failure(const LinkCertificate& c) {
  try {
    verify_link(c);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("certificate unexpectedly verified");
  return ErrorKind::UsageError;
}

std::vector<std::string> render(const BianchiGroup& G, const FillingLists& L) {
  std::vector<std::string> out;
  for (size_t c = 0; c < L.size(); ++c)
    for (const Filling& f : L[c])
      out.push_back(std::to_string(c) + ":" + G.format(f.g) + ":" + std::to_string(f.p) + "," + std::to_string(f.q));
  return out;
}

}  // namespace

TEST_SUITE("certificate") {
  TEST_CASE("bundled certificates verify") {
    struct Case {
      const char* file;
      const char* verdict;
    };
    for (Case c : {Case{"d2_1ps2.json", "4-Link"}, Case{"d15_2w.json", "6-Link"}, Case{"d15_2w_expand.json", "6-Link"},
                   Case{"d11_3ps11.json", "12-Link"}, Case{"d15_1ps15.json", "12-Link"}, Case{"d7_1ps7.json", "3-Link"}}) {
      CAPTURE(c.file);
      LinkReport r = verify_link(load_certificate(cert_path(c.file)));
      CHECK(r.verdict == c.verdict);
      CHECK(r.bi_order == r.psl_order);
    }
  }

  TEST_CASE("expand shorthand") {
    LinkCertificate a = load_certificate(cert_path("d15_2w.json"));
    LinkCertificate b = load_certificate(cert_path("d15_2w_expand.json"));
    BianchiGroup G = bianchi_data(15);
    CHECK(render(G, expand_certificate(a)) == render(G, expand_certificate(b)));
    size_t n = 0;
    for (const auto& l : expand_certificate(b)) n += l.size();
    CHECK(n == 6);
  }

  TEST_CASE("symmetrize shorthand") {
    LinkCertificate c = load_certificate(cert_path("d11_3ps11.json"));
    BianchiGroup G = bianchi_data(11);
    FillingLists L = expand_certificate(c);
    REQUIRE(L.size() == 1);
    REQUIRE(L[0].size() == 12);
    Word a = G.parse("a");
    for (size_t j = 0; j < 6; ++j) {
      CHECK(L[0][j + 6].g == free_reduce(word_concat(a, L[0][j].g)));
      CHECK(L[0][j + 6].p == L[0][j].p);
      CHECK(L[0][j + 6].q == L[0][j].q);
    }
    LinkCertificate empty;
    empty.d = 2;
    CHECK(expand_certificate(empty).empty());
  }

  TEST_CASE("json round trip") {
    for (const char* f : {"d2_1ps2.json", "d11_3ps11.json", "d15_2w_expand.json", "d7_1ps7.json"}) {
      LinkCertificate c = load_certificate(cert_path(f));
      LinkCertificate d = parse_certificate(certificate_to_json(c));
      CHECK(certificate_to_json(d) == certificate_to_json(c));
      CHECK(render(bianchi_data(c.d), expand_certificate(c)) == render(bianchi_data(d.d), expand_certificate(d)));
    }
  }

  TEST_CASE("mutations fail with the named test") {
    LinkCertificate base = load_certificate(cert_path("d2_1ps2.json"));

    LinkCertificate wrong = base;
    wrong.expected_order = 13;
    CHECK(failure(wrong) == ErrorKind::Test1Failed);

    LinkCertificate triple = base;
    triple.triples[0] = {1, 0, 1};
    CHECK(failure(triple) == ErrorKind::Test1Failed);

    LinkCertificate dropped = base;
    dropped.fillings[0].pop_back();
    CHECK(failure(dropped) == ErrorKind::Test2Failed);

    LinkCertificate dup = base;
    dup.fillings[0].push_back(dup.fillings[0][1]);
    CHECK(failure(dup) == ErrorKind::Test3Failed);

    LinkCertificate trivialised = base;
    for (auto& f : trivialised.fillings[0]) f.p = 1, f.q = 0;
    CHECK(failure(trivialised) == ErrorKind::Test2Failed);
  }

  TEST_CASE("malformed input") {
    CHECK_THROWS_AS(parse_certificate("{"), Error);
    try {
      parse_certificate(R"({"d": 2, "ideal_gens": ["1+s"], "triples": [[3,1,1]], "expected_order": 12,
                           "fillings": [[{"g": "Id", "pq": [0, 0]}]]})");
      FAIL("accepted a (0,0) filling");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MalformedShorthand);
    }
    try {
      verify_link(parse_certificate(R"({"d": 2, "ideal_gens": ["1+s"], "triples": [[3,1,1]], "expected_order": 12,
                                       "fillings": [[{"g": "Id", "pq": [0, 1]}], []]})"));
      FAIL("accepted a wrong class count");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MalformedShorthand);
    }
  }

  TEST_CASE("link2") {
    Link2Report r = verify_link2(7, {{0, 1}}, 6);
    CHECK(r.verdict == "3-Link");
    CHECK(r.cusps == 3);
    auto kind = [](int64_t d, uint64_t order) {
      try {
        verify_link2(d, {{0, 1}}, order);
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::UsageError;
    };
    CHECK(kind(7, 7) == ErrorKind::OrderMismatch);
    CHECK(kind(1, 6) == ErrorKind::UnsupportedD);
    CHECK(kind(3, 6) == ErrorKind::UnsupportedD);
  }

  TEST_CASE("automatic search") {
    auto c = search_certificate(2, testing::ideal(2, "1+s"));
    REQUIRE(c.has_value());
    CHECK(verify_link(*c).verdict == "4-Link");
    auto r = search_certificate(7, testing::ideal(7, "(3+s)/2"));
    REQUIRE(r.has_value());
    CHECK(verify_link(*r).verdict == "6-Link");
    CHECK_FALSE(search_certificate(7, testing::ideal(7, "3")).has_value());
  }
}
