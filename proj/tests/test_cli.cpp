#include <filesystem>
#include <fstream>

#include "bianchi/errors.hpp"
#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace bianchi;
using namespace bianchi::cli;

namespace {

struct Ran {
  int code;
  std::string out, err;
};

Ran run_args(const std::vector<std::string>& args) {
  Ran r;
  r.code = run(args, r.out, r.err);
  return r;
}

ErrorKind parse_failure(const std::vector<std::string>& args) {
  try {
    parse_invocation(args);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Test1Failed;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("parse_invocation") {
    Plan p = parse_invocation({"psl-order", "--d", "1", "--ideal", "2"});
    CHECK(p.command == "psl-order");
    CHECK(p.d == 1);
    CHECK(p.gens == std::vector<QuadInt>{QuadInt(1, 2)});

    Plan v = parse_invocation({"verify-link", "cert.json"});
    CHECK(v.command == "verify-link");
    CHECK(v.paths == std::vector<std::string>{"cert.json"});

    Plan b = parse_invocation({"build", "--d", "2", "--ideal", "1+w", "--gamma1"});
    CHECK(b.command == "build");
    CHECK(b.gamma1);
    CHECK(ideal_from_generators(2, b.gens).str() == "(3,1,1)");

    Plan s = parse_invocation({"survey", "--max-norm", "5", "--jobs", "2", "--format", "json"});
    CHECK(s.d == 0);
    CHECK(s.jobs == 2);
    CHECK(s.format == Format::Json);

    Plan t = parse_invocation({"bi-order", "--d", "23", "--ideal", "[6, (5-s)/2]", "--triples", "6,-2,1;6,1,1;3,0,2"});
    CHECK(t.triples.size() == 3);
    CHECK(t.triples[0].k == -2);
  }

  TEST_CASE("usage errors") {
    CHECK(parse_failure({"psl-order", "--d", "1", "--ideal", "2", "--bogus"}) == ErrorKind::UsageError);
    CHECK(parse_failure({"frobnicate"}) == ErrorKind::UsageError);
    CHECK(parse_failure({}) == ErrorKind::UsageError);
    CHECK(parse_failure({"psl-order", "--d", "1"}) == ErrorKind::UsageError);
    CHECK(parse_failure({"psl-order", "--d", "4", "--ideal", "2"}) == ErrorKind::NotSquareFree);
    CHECK(parse_failure({"psl-order", "--d", "1", "--ideal", "2+"}) == ErrorKind::ParseError);
    CHECK(parse_failure({"survey", "--format", "xml"}) == ErrorKind::UsageError);
    Ran r = run_args({"psl-order", "--d", "1", "--ideal", "2", "--bogus"});
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(run_args({"psl-order", "--d", "1", "--ideal", "0"}).code == 2);
    CHECK(run_args({"bi-order", "--d", "13", "--ideal", "2"}).code == 2);
    CHECK(run_args({"--help"}).code == 0);
  }

  TEST_CASE("psl-order report") {
    Ran r = run_args({"psl-order", "--d", "7", "--ideal", "(1+s)/2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("psl_order: 6\n") != std::string::npos);
    Ran j = run_args({"psl-order", "--d", "1", "--ideal", "2", "--format", "json"});
    auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["schema_version"] == kSchemaVersion);
    CHECK(doc["psl_order"] == 48);
  }

  TEST_CASE("verify-link exit codes") {
    Ran ok = run_args({"verify-link", testing::cert_path("d2_1ps2.json")});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("verdict: 4-Link") != std::string::npos);

    auto doc = nlohmann::json::parse(std::ifstream(testing::cert_path("d2_1ps2.json")));
    doc["expected_order"] = 13;
    std::filesystem::path bad = std::filesystem::temp_directory_path() / "bianchi_bad_cert.json";
    std::ofstream(bad) << doc.dump();
    Ran fail = run_args({"verify-link", bad.string(), "--format", "json"});
    CHECK(fail.code == 1);
    auto rep = nlohmann::json::parse(fail.out);
    CHECK(rep["verdict"] == "fail");
    CHECK(rep["failed"] == "Test1Failed");
    std::filesystem::remove(bad);

    CHECK(run_args({"verify-link", "/nonexistent/cert.json"}).code == 2);
  }

  TEST_CASE("budget exhaustion") {
    Ran r = run_args({"bi-order", "--d", "7", "--ideal", "3", "--budget", "100"});
    CHECK(r.code == 3);
    CHECK(r.err.find("BudgetExceeded") != std::string::npos);
    Ran ok = run_args({"bi-order", "--d", "7", "--ideal", "3", "--triples", "3,0,3"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("bi_order: 1080") != std::string::npos);
    CHECK(run_args({"bi-order", "--d", "7", "--ideal", "3", "--triples", "1,0,1"}).code == 2);
  }

  TEST_CASE("survey rows") {
    Ran r = run_args({"survey", "--d", "1", "--max-norm", "5", "--format", "json"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    auto rows = doc["rows"];
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["ideal"] == "<1+i>");
    CHECK(rows[0]["method"] == "Orbifold");
    CHECK(rows[1]["ideal"] == "<2>");
    CHECK(rows[1]["result"] == "6-Link");
    CHECK(rows[2]["ideal"] == "<2+i>");
    CHECK(rows[2]["result"] == "6-Link");
    CHECK(rows[2]["psl"] == 60);

    Ran again = run_args({"survey", "--d", "1", "--max-norm", "5", "--format", "json", "--jobs", "1"});
    CHECK(again.out == r.out);
    Ran par = run_args({"survey", "--d", "1", "--max-norm", "5", "--format", "json", "--jobs", "3"});
    CHECK(par.out == r.out);
  }

  TEST_CASE("survey flags special cases and budget rows") {
    SurveyRow s = survey_row(2, testing::ideal(2, "1+3*s"), 1000);
    CHECK(s.method == "special-case (external proof)");
    SurveyRow c = survey_row(2, testing::ideal(2, "1-3*s"), 1000);
    CHECK(c.method == "special-case (external proof)");
    SurveyRow o = survey_row(7, testing::ideal(7, "3"), 100000);
    CHECK(o.method == "Order");
    CHECK(o.result == "|B(I)| = 1080");
    SurveyRow b = survey_row(7, testing::ideal(7, "3"), 200);
    CHECK(b.method == "not checked by this artifact");
  }

  TEST_CASE("domain cache through the cli") {
    std::filesystem::path dir = std::filesystem::temp_directory_path() / "bianchi_cli_cache";
    std::filesystem::remove_all(dir);
    Ran first = run_args({"domain", "--d", "7", "--cache-dir", dir.string()});
    CHECK(first.code == 0);
    CHECK(first.out.find("from_cache: false") != std::string::npos);
    Ran second = run_args({"domain", "--d", "7", "--cache-dir", dir.string()});
    CHECK(second.out.find("from_cache: true") != std::string::npos);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("homology report") {
    std::string cache = BIANCHI_TEST_CACHE;
    Ran r = run_args({"homology", "--d", "2", "--ideal", "1+s", "--cache-dir", cache, "--format", "json"});
    CHECK(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["copies"] == 12);
    CHECK(doc["cusps"] == 4);
    CHECK(doc["quotient"] == "0");
    CHECK(doc["h1"] == "Z^4");
    Ran o = run_args({"build", "--d", "1", "--ideal", "1+i", "--cache-dir", cache});
    CHECK(o.out.find("kind: orbifold") != std::string::npos);
  }
}
