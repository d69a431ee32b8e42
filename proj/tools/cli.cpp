#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "bianchi/certificate.hpp"
#include "bianchi/domain.hpp"
#include "bianchi/errors.hpp"
#include "bianchi/homology.hpp"
#include "bianchi/simplify.hpp"
#include "bianchi/triangulation.hpp"
#include "json.hpp"
#include "pool.hpp"

namespace bianchi::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr size_t kSurveyBudget = 200000;

std::vector<PeripheralTriple> parse_triples(const std::string& text) {
  std::vector<PeripheralTriple> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    PeripheralTriple t;
    char c1 = 0, c2 = 0;
    std::stringstream is(item);
    if (!(is >> t.n >> c1 >> t.k >> c2 >> t.l) || c1 != ',' || c2 != ',' || !(is >> std::ws).eof())
      throw Error(ErrorKind::ParseError, "bad triple '" + item + "', expected n,k,l");
    out.push_back(t);
  }
  if (out.empty()) throw Error(ErrorKind::ParseError, "empty --triples");
  return out;
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + scalar_text(v[i]);
    return s;
  }
  return v.dump();
}

void render_table(std::ostream& os, const json& rows) {
  std::vector<std::string> cols;
  for (const auto& r : rows)
    for (auto it = r.begin(); it != r.end(); ++it)
      if (std::find(cols.begin(), cols.end(), it.key()) == cols.end()) cols.push_back(it.key());
  std::vector<std::vector<std::string>> cells;
  std::vector<size_t> width(cols.size());
  for (size_t c = 0; c < cols.size(); ++c) width[c] = cols[c].size();
  for (const auto& r : rows) {
    std::vector<std::string> line;
    for (size_t c = 0; c < cols.size(); ++c) {
      line.push_back(r.contains(cols[c]) ? scalar_text(r[cols[c]]) : "");
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::string s;
    for (size_t c = 0; c < line.size(); ++c) {
      s += line[c];
      if (c + 1 < line.size()) s += std::string(width[c] - line[c].size() + 2, ' ');
    }
    os << s << "\n";
  };
  emit(cols);
  for (const auto& l : cells) emit(l);
}

std::string render(const json& report, Format fmt) {
  if (fmt == Format::Json) return report.dump(2) + "\n";
  std::ostringstream os;
  for (auto it = report.begin(); it != report.end(); ++it) {
    if (it.key() == "schema_version") continue;
    const json& v = it.value();
    if (v.is_array() && !v.empty() && v[0].is_object()) {
      os << it.key() << ":\n";
      render_table(os, v);
    } else if (v.is_object()) {
      for (auto jt = v.begin(); jt != v.end(); ++jt) os << it.key() << "." << jt.key() << ": " << scalar_text(jt.value()) << "\n";
    } else {
      os << it.key() << ": " << scalar_text(v) << "\n";
    }
  }
  return os.str();
}

json header(const std::string& command) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

std::string cache_dir_of(const Plan& p) {
  if (const char* env = std::getenv("CF_CACHE_DIR")) return env;
  return p.cache_dir;
}

QuadIdeal ideal_of(const Plan& p) { return ideal_from_generators(p.d, p.gens); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream o(path);
  if (!o) throw Error(ErrorKind::UsageError, "cannot write " + path);
  o << text;
}

json triples_json(const std::vector<PeripheralTriple>& ts) {
  json a = json::array();
  for (const auto& t : ts) a.push_back({t.n, t.k, t.l});
  return a;
}

Outcome cmd_psl_order(const Plan& p) {
  QuadIdeal I = ideal_of(p);
  json r = header("psl-order");
  r["d"] = p.d;
  r["ideal"] = format_ideal(I);
  r["triple"] = I.str();
  r["norm"] = I.norm();
  r["psl_order"] = psl_order(I);
  return {0, render(r, p.format)};
}

Outcome cmd_domain(const Plan& p) {
  bool cached = false;
  FundamentalDomain F = load_or_compute_domain(p.d, cache_dir_of(p), &cached);
  VertexReport vr = classify_vertices(single_copy(F));
  json r = header("domain");
  r["d"] = p.d;
  r["simplices"] = F.size();
  r["cusps"] = vr.cusps.count;
  r["from_cache"] = cached;
  if (!p.out.empty()) write_file(p.out, domain_to_json(F));
  return {0, render(r, p.format)};
}

struct Built {
  FundamentalDomain F;
  Triangulation T;
  bool orbifold = false;
};

Built build(const Plan& p) {
  Built b;
  b.F = load_or_compute_domain(p.d, cache_dir_of(p));
  QuadIdeal I = ideal_of(p);
  size_t budget = p.budget.value_or(kDefaultTetBudget);
  b.T = p.gamma1 ? build_gamma1(b.F, I, budget) : build_principal(b.F, I, budget);
  b.orbifold = detect_orbifold(b.T, b.F);
  return b;
}

json build_fields(const Plan& p, const Built& b, json r) {
  r["d"] = p.d;
  r["ideal"] = format_ideal(ideal_of(p));
  r["variant"] = p.gamma1 ? "gamma1" : "principal";
  r["copies"] = b.T.per_copy ? b.T.size() / (size_t)b.T.per_copy : 0;
  r["tetrahedra"] = b.T.size();
  r["orbifold"] = b.orbifold;
  return r;
}

json stats_json(const SimplifyStats& s) {
  return {{"built", s.built},       {"coarsened", s.coarsened}, {"collapsed", s.collapsed},
          {"finite_vertices", s.finite_vertices}, {"attempts", s.attempts}, {"seed", s.seed}};
}

Outcome cmd_build(const Plan& p) {
  Built b = build(p);
  json r = build_fields(p, b, header("build"));
  if (b.orbifold) {
    r["kind"] = "orbifold";
  } else {
    r["kind"] = "manifold";
    SimplifyStats st;
    Triangulation S = simplify(b.T, &st);
    VertexReport vr = classify_vertices(S);
    r["cusps"] = vr.cusps.count;
    r["simplified_tetrahedra"] = S.size();
    r["finite_vertices"] = vr.finite_vertices;
    if (p.stats) r["stats"] = stats_json(st);
    if (!p.out.empty()) write_file(p.out, triangulation_to_json(S));
  }
  return {0, render(r, p.format)};
}

Outcome cmd_homology(const Plan& p) {
  Built b = build(p);
  json r = build_fields(p, b, header("homology"));
  if (b.orbifold) {
    r["verdict"] = "orbifold";
    return {0, render(r, p.format)};
  }
  SimplifyStats st;
  Triangulation S = simplify(b.T, &st);
  HomologyResult h = h1_with_quotient(S);
  r["simplified_tetrahedra"] = S.size();
  r["cusps"] = h.cusps;
  r["quotient"] = h.quotient.str();
  r["h1"] = h.h1.str();
  int code = 0;
  if (p.gamma1) {
    ObstructionData od;
    if (h.quotient.finite()) od.quotient_order = h.quotient.order();
    od.degree = mpz_class((unsigned long)ideal_of(p).norm());
    Verdict v = cover_obstruction(ObstructionKind::Gamma1Degree, od);
    r["verdict"] = verdict_name(v);
    code = v == Verdict::Excluded ? 1 : 0;
  } else {
    r["verdict"] = h.quotient.trivial() ? "inconclusive" : "excluded";
    code = h.quotient.trivial() ? 0 : 1;
  }
  if (p.stats) r["stats"] = stats_json(st);
  return {code, render(r, p.format)};
}

Outcome cmd_bi_order(const Plan& p) {
  BianchiGroup G = bianchi_data(p.d);
  QuadIdeal I = ideal_of(p);
  std::vector<PeripheralTriple> ts;
  if (p.triples.empty()) {
    for (int c = 0; c < G.cusp_classes(); ++c) ts.push_back(find_peripheral_triple(G, I, c));
  } else {
    ts = broadcast_triples(G, p.triples);
    for (int c = 0; c < G.cusp_classes(); ++c)
      if (!validate_peripheral_triple(G, I, c, ts[(size_t)c]))
        throw Error(ErrorKind::UsageError, "triple " + std::to_string(c) + " is not valid for this ideal");
  }
  TcStats st;
  CosetTable T = todd_coxeter(build_BI(G, ts), {}, p.budget.value_or(kDefaultCosetBudget), &st);
  json r = header("bi-order");
  r["d"] = p.d;
  r["ideal"] = format_ideal(I);
  r["triples"] = triples_json(ts);
  r["bi_order"] = T.index();
  r["psl_order"] = psl_order(I);
  if (p.stats)
    r["stats"] = {{"defined", st.defined}, {"max_live", st.max_live}, {"lookaheads", st.lookaheads},
                  {"coincidences", st.coincidences}};
  return {0, render(r, p.format)};
}

bool verified_negative(ErrorKind k) {
  return k == ErrorKind::Test1Failed || k == ErrorKind::Test2Failed || k == ErrorKind::Test3Failed ||
         k == ErrorKind::OrderMismatch || k == ErrorKind::MalformedShorthand;
}

Outcome cmd_verify_link(const Plan& p) {
  const size_t budget = p.budget.value_or(kDefaultCosetBudget);
  std::vector<json> rows(p.paths.size());
  std::vector<int> codes(p.paths.size(), 0);
  parallel_for(p.paths.size(), p.jobs, [&](size_t i) {
    json row;
    row["file"] = p.paths[i];
    try {
      LinkCertificate cert = load_certificate(p.paths[i]);
      LinkReport rep = verify_link(cert, budget);
      row["verdict"] = rep.verdict;
      row["cusps"] = rep.cusps;
      row["bi_order"] = rep.bi_order;
      row["psl_order"] = rep.psl_order;
      if (cert.link2) {
        Link2Report l2 = verify_link2(cert.d, cert.link2->pq, cert.link2->expected_order, budget);
        row["link2"] = l2.verdict;
      }
    } catch (const Error& e) {
      if (verified_negative(e.kind())) {
        row["verdict"] = "fail";
        row["failed"] = error_kind_name(e.kind());
        row["detail"] = e.detail();
        codes[i] = 1;
      } else if (e.kind() == ErrorKind::BudgetExceeded) {
        row["verdict"] = "budget exceeded";
        row["detail"] = e.detail();
        codes[i] = 3;
      } else {
        throw;
      }
    }
    rows[i] = std::move(row);
  });
  json r = header("verify-link");
  int code = 0;
  for (int c : codes) code = std::max(code, c);
  if (rows.size() == 1) {
    for (auto it = rows[0].begin(); it != rows[0].end(); ++it) r[it.key()] = it.value();
  } else {
    r["results"] = rows;
  }
  return {code, render(r, p.format)};
}

Outcome cmd_survey(const Plan& p) {
  std::vector<int64_t> ds;
  if (p.d) ds.push_back(p.d);
  else ds = bundled_bianchi_d();
  auto rows = run_survey(ds, p.max_norm, p.budget.value_or(kSurveyBudget), p.jobs);
  json arr = json::array();
  for (const auto& row : rows) {
    json j;
    if (!p.d) j["d"] = row.d;
    j["ideal"] = row.ideal_str;
    j["norm"] = row.norm;
    j["psl"] = row.psl;
    j["method"] = row.method;
    j["result"] = row.result;
    arr.push_back(j);
  }
  json r = header("survey");
  if (p.d) r["d"] = p.d;
  r["max_norm"] = p.max_norm;
  r["rows"] = arr;
  return {0, render(r, p.format)};
}

}  // namespace

Plan parse_invocation(const std::vector<std::string>& args) {
  CLI::App app{"Principal congruence link complements: domains, triangulations, homology and certificates",
               "bianchi"};
  app.require_subcommand(0, 1);
  Plan plan;
  std::string format = "text", triples;

  auto add_d = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--d", plan.d, "square-free d > 0");
    if (required) o->required();
  };
  auto add_ideal = [&](CLI::App* s) {
    s->add_option("--ideal", plan.ideal_text, "ideal generators, e.g. \"2\", \"(1+s)/2\", \"[2, 1+w]\"")->required();
  };
  auto add_format = [&](CLI::App* s) {
    s->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  };
  auto add_budget = [&](CLI::App* s) { s->add_option("--budget", plan.budget, "coset or tetrahedron budget"); };
  auto add_cache = [&](CLI::App* s) {
    s->add_option("--cache-dir", plan.cache_dir, "domain cache directory (CF_CACHE_DIR overrides)");
  };
  auto add_jobs = [&](CLI::App* s) {
    s->add_option("--jobs", plan.jobs, "worker threads")->check(CLI::Range(1, 256));
  };

  auto* domain = app.add_subcommand("domain", "compute or load the fundamental domain");
  add_d(domain, true);
  add_cache(domain);
  domain->add_option("--out", plan.out, "write the domain JSON here");
  add_format(domain);

  for (auto [name, desc] : {std::pair{"build", "build and simplify the congruence triangulation"},
                            std::pair{"homology", "H1 and the cover obstruction"}}) {
    auto* s = app.add_subcommand(name, desc);
    add_d(s, true);
    add_ideal(s);
    s->add_flag("--gamma1", plan.gamma1, "Gamma_1(I) instead of Gamma(I)");
    add_budget(s);
    add_cache(s);
    if (std::string(name) == "build") s->add_option("--out", plan.out, "write the simplified triangulation here");
    s->add_flag("--stats", plan.stats, "per-phase simplex counts");
    add_format(s);
  }

  auto* psl = app.add_subcommand("psl-order", "|PSL(2, O/I)|");
  add_d(psl, true);
  add_ideal(psl);
  add_format(psl);

  auto* bi = app.add_subcommand("bi-order", "order of B(I) by coset enumeration");
  add_d(bi, true);
  add_ideal(bi);
  bi->add_option("--triples", triples, "n,k,l per cusp class, separated by ';'");
  add_budget(bi);
  bi->add_flag("--stats", plan.stats, "enumeration counters");
  add_format(bi);

  auto* vl = app.add_subcommand("verify-link", "check link certificates");
  vl->add_option("path", plan.paths, "certificate JSON files")->required();
  add_budget(vl);
  add_jobs(vl);
  add_format(vl);

  auto* sv = app.add_subcommand("survey", "classify every ideal up to a norm bound");
  add_d(sv, false);
  sv->add_option("--max-norm", plan.max_norm, "largest ideal norm")->check(CLI::Range(1, 100000));
  add_budget(sv);
  add_jobs(sv);
  add_format(sv);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    plan.help = app.help();
    return plan;
  } catch (const CLI::CallForAllHelp&) {
    plan.help = app.help("", CLI::AppFormatMode::All);
    return plan;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::UsageError, std::string(e.what()) + "\n" + app.help());
  }
  if (app.get_subcommands().empty()) throw Error(ErrorKind::UsageError, "no subcommand given\n" + app.help());
  for (auto* s : app.get_subcommands()) plan.command = s->get_name();

  plan.format = format == "json" ? Format::Json : Format::Text;
  if (plan.command != "verify-link" && !(plan.command == "survey" && plan.d == 0)) {
    if (plan.d <= 0) throw Error(ErrorKind::UsageError, "--d must be positive");
    if (!is_square_free(plan.d)) throw Error(ErrorKind::NotSquareFree, std::to_string(plan.d) + " is not square-free");
  }
  if (!plan.ideal_text.empty()) {
    plan.gens = parse_ideal_literal(plan.d, plan.ideal_text);
    if (plan.gens.empty()) throw Error(ErrorKind::ParseError, "no ideal generators");
    if (ideal_from_generators(plan.d, plan.gens).is_unit())
      throw Error(ErrorKind::UsageError, "the ideal is the whole ring");
  }
  if (!triples.empty()) plan.triples = parse_triples(triples);
  return plan;
}

Outcome execute_plan(const Plan& plan) {
  if (plan.command.empty()) return {0, plan.help};
  if (plan.command == "psl-order") return cmd_psl_order(plan);
  if (plan.command == "domain") return cmd_domain(plan);
  if (plan.command == "build") return cmd_build(plan);
  if (plan.command == "homology") return cmd_homology(plan);
  if (plan.command == "bi-order") return cmd_bi_order(plan);
  if (plan.command == "verify-link") return cmd_verify_link(plan);
  if (plan.command == "survey") return cmd_survey(plan);
  throw Error(ErrorKind::UsageError, "unknown command " + plan.command);
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::UsageError:
    case ErrorKind::ParseError:
    case ErrorKind::UnsupportedD:
    case ErrorKind::ZeroIdeal:
    case ErrorKind::NotSquareFree:
      return 2;
    case ErrorKind::BudgetExceeded:
      return 3;
    default:
      return 1;
  }
}

int run(const std::vector<std::string>& args, std::string& out, std::string& err) {
  Format fmt = Format::Text;
  for (size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--format" && args[i + 1] == "json") fmt = Format::Json;
  try {
    Outcome o = execute_plan(parse_invocation(args));
    out = o.report;
    return o.exit_code;
  } catch (const Error& e) {
    if (fmt == Format::Json) {
      json j;
      j["schema_version"] = kSchemaVersion;
      j["error"] = error_kind_name(e.kind());
      j["detail"] = e.detail();
      out = j.dump(2) + "\n";
    }
    err = std::string(error_kind_name(e.kind())) + ": " + e.detail() + "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err = std::string("error: ") + e.what() + "\n";
    return 1;
  }
}

}  // namespace bianchi::cli
