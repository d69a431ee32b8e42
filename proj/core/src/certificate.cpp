#include <algorithm>
#include <fstream>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "bianchi/certificate.hpp"
#include "bianchi/errors.hpp"
#include "json.hpp"

namespace bianchi {

using nlohmann::json;

QuadIdeal LinkCertificate::ideal() const { return ideal_from_generators(d, ideal_gens); }

namespace {

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorKind::MalformedShorthand, why); }

std::pair<int64_t, int64_t> read_pq(const json& j) {
  if (!j.is_array() || j.size() != 2) malformed("pq must be a pair of integers");
  auto pq = std::make_pair(j[0].get<int64_t>(), j[1].get<int64_t>());
  if (pq.first == 0 && pq.second == 0) malformed("filling coefficients (0,0)");
  return pq;
}

FillingLists read_fillings(const json& j, const BianchiGroup& G) {
  FillingLists out;
  if (!j.is_array()) malformed("filling lists must be arrays");
  for (const json& cls : j) {
    if (!cls.is_array()) malformed("filling lists must be arrays");
    std::vector<Filling> list;
    for (const json& e : cls) {
      if (!e.is_object() || !e.contains("g") || !e.contains("pq")) malformed("filling entries need g and pq");
      auto [p, q] = read_pq(e["pq"]);
      list.push_back({G.parse(e["g"].get<std::string>()), p, q});
    }
    out.push_back(std::move(list));
  }
  return out;
}

json write_fillings(const FillingLists& lists, const BianchiGroup& G) {
  json out = json::array();
  for (const auto& cls : lists) {
    json a = json::array();
    for (const Filling& f : cls) a.push_back({{"g", G.format(f.g)}, {"pq", {f.p, f.q}}});
    out.push_back(a);
  }
  return out;
}

void append_lists(FillingLists& into, const FillingLists& from) {
  if (from.empty()) return;
  if (into.empty()) into.resize(from.size());
  if (into.size() != from.size()) malformed("inconsistent number of cusp classes in filling lists");
  for (size_t i = 0; i < from.size(); ++i) into[i].insert(into[i].end(), from[i].begin(), from[i].end());
}

}  // namespace

LinkCertificate parse_certificate(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("certificate: ") + e.what());
  }
  LinkCertificate c;
  try {
    c.d = j.at("d").get<int64_t>();
    BianchiGroup G = bianchi_data(c.d);
    const json& gens = j.at("ideal_gens");
    if (gens.is_string()) {
      c.ideal_gens = parse_ideal_literal(c.d, gens.get<std::string>());
    } else {
      for (const json& g : gens) c.ideal_gens.push_back(parse_quad_int(c.d, g.get<std::string>()));
    }
    for (const json& t : j.at("triples")) {
      if (!t.is_array() || t.size() != 3) throw Error(ErrorKind::ParseError, "triples must have three entries");
      c.triples.push_back({t[0].get<int64_t>(), t[1].get<int64_t>(), t[2].get<int64_t>()});
    }
    c.expected_order = j.at("expected_order").get<uint64_t>();
    if (j.contains("fillings")) c.fillings = read_fillings(j["fillings"], G);
    if (j.contains("expand")) {
      const json& e = j["expand"];
      ExpandShorthand x;
      for (const json& g : e.at("g")) x.g.push_back(G.parse(g.get<std::string>()));
      for (const json& cls : e.at("pq")) {
        std::vector<std::pair<int64_t, int64_t>> row;
        for (const json& pq : cls) row.push_back(read_pq(pq));
        x.pq.push_back(row);
      }
      c.expand = x;
    }
    if (j.contains("symmetry")) {
      const json& s = j["symmetry"];
      SymmetryShorthand y;
      y.s = G.parse(s.at("g").get<std::string>());
      y.order = s.at("order").get<int>();
      y.fixed = read_fillings(s.at("fixed"), G);
      y.moved = read_fillings(s.at("moved"), G);
      c.symmetry = y;
    }
    if (j.contains("link2")) {
      Link2Data l;
      for (const json& pq : j["link2"].at("pq")) l.pq.push_back(read_pq(pq));
      l.expected_order = j["link2"].at("order").get<uint64_t>();
      c.link2 = l;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("certificate: ") + e.what());
  }
  return c;
}

LinkCertificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UsageError, "cannot read certificate '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_certificate(ss.str());
}

std::string certificate_to_json(const LinkCertificate& c) {
  BianchiGroup G = bianchi_data(c.d);
  json j;
  j["d"] = c.d;
  json gens = json::array();
  for (const QuadInt& g : c.ideal_gens) gens.push_back(g.str());
  j["ideal_gens"] = gens;
  json ts = json::array();
  for (const auto& t : c.triples) ts.push_back({t.n, t.k, t.l});
  j["triples"] = ts;
  j["expected_order"] = c.expected_order;
  if (!c.fillings.empty()) j["fillings"] = write_fillings(c.fillings, G);
  if (c.expand) {
    json g = json::array();
    for (const Word& w : c.expand->g) g.push_back(G.format(w));
    j["expand"] = {{"g", g}, {"pq", c.expand->pq}};
  }
  if (c.symmetry)
    j["symmetry"] = {{"g", G.format(c.symmetry->s)},
                     {"order", c.symmetry->order},
                     {"fixed", write_fillings(c.symmetry->fixed, G)},
                     {"moved", write_fillings(c.symmetry->moved, G)}};
  if (c.link2) j["link2"] = {{"pq", c.link2->pq}, {"order", c.link2->expected_order}};
  return j.dump(2);
}

FillingLists expand_certificate(const LinkCertificate& c) {
  FillingLists out = c.fillings;
  if (c.expand) {
    FillingLists e;
    for (const auto& row : c.expand->pq) {
      if (row.size() != c.expand->g.size())
        malformed("Expand: " + std::to_string(row.size()) + " coefficient pairs for " +
                  std::to_string(c.expand->g.size()) + " elements");
      std::vector<Filling> list;
      for (size_t i = 0; i < row.size(); ++i) list.push_back({c.expand->g[i], row[i].first, row[i].second});
      e.push_back(std::move(list));
    }
    append_lists(out, e);
  }
  if (c.symmetry) {
    const SymmetryShorthand& s = *c.symmetry;
    if (s.order < 1) malformed("Symmetrize: order must be positive");
    size_t classes = std::max(s.fixed.size(), s.moved.size());
    if ((!s.fixed.empty() && s.fixed.size() != classes) || (!s.moved.empty() && s.moved.size() != classes))
      malformed("Symmetrize: fixed and moved lists disagree on the number of cusp classes");
    FillingLists e(classes);
    for (size_t i = 0; i < classes; ++i) {
      if (!s.fixed.empty()) e[i] = s.fixed[i];
      if (s.moved.empty()) continue;
      for (int j = 0; j < s.order; ++j) {
        Word prefix = word_pow(s.s, j);
        for (const Filling& f : s.moved[i]) e[i].push_back({word_concat(prefix, f.g), f.p, f.q});
      }
    }
    append_lists(out, e);
  }
  return out;
}

Word filling_word(const BianchiGroup& G, int cusp, PeripheralTriple t, const Filling& f) {
  auto [x, y] = peripheral_lattice(G, cusp, t);
  Word w = word_concat(f.g, word_concat(word_pow(x, f.p), word_pow(y, f.q)));
  return word_concat(w, word_inverse(f.g));
}

LinkReport verify_link(const LinkCertificate& c, size_t budget) {
  BianchiGroup G = bianchi_data(c.d);
  const QuadIdeal I = c.ideal();
  std::vector<PeripheralTriple> ts = broadcast_triples(G, c.triples);
  FillingLists lists = expand_certificate(c);
  if ((int)lists.size() != G.cusp_classes())
    throw Error(ErrorKind::MalformedShorthand, "expected " + std::to_string(G.cusp_classes()) +
                                                   " filling lists, got " + std::to_string(lists.size()));
  for (int i = 0; i < G.cusp_classes(); ++i)
    if (!validate_peripheral_triple(G, I, i, ts[i]))
      throw Error(ErrorKind::Test1Failed, "triple (" + std::to_string(ts[i].n) + "," + std::to_string(ts[i].k) + "," +
                                              std::to_string(ts[i].l) + ") does not describe cusp class " +
                                              std::to_string(i + 1) + " of " + format_ideal(I));
  LinkReport R;
  R.psl_order = psl_order(I);

  // test 1
  Presentation B = build_BI(G, ts);
  CosetTable T = todd_coxeter(B, {}, budget);
  R.bi_order = (uint64_t)T.index();
  if (c.expected_order != R.psl_order)
    throw Error(ErrorKind::Test1Failed, "expected order " + std::to_string(c.expected_order) +
                                            " differs from |PSL(2,O/I)| = " + std::to_string(R.psl_order));
  if (R.bi_order != R.psl_order)
    throw Error(ErrorKind::Test1Failed,
                "|B(I)| = " + std::to_string(R.bi_order) + " but |PSL(2,O/I)| = " + std::to_string(R.psl_order));

  // test 2
  SchreierResult S = reidemeister_schreier(G.presentation, T);
  R.n_schreier_gens = S.presentation.ngens();
  Presentation N = S.presentation;
  for (int i = 0; i < G.cusp_classes(); ++i)
    for (size_t j = 0; j < lists[i].size(); ++j) {
      int end = 0;
      Word w = S.rewrite_from(0, filling_word(G, i, ts[i], lists[i][j]), &end);
      if (end != 0)
        throw Error(ErrorKind::Test2Failed, "filling " + G.format(lists[i][j].g) + " of class " +
                                                std::to_string(i + 1) + " does not lie in N(I)");
      if (!w.empty()) N.relators.push_back(w);
    }
  Presentation Nq = tietze_simplify(N);
  R.n_gens_after_tietze = Nq.ngens();
  if (Nq.ngens() > 0) {
    AbelianGroup ab = abelian_invariants(Nq);
    if (!ab.trivial())
      throw Error(ErrorKind::Test2Failed, "fillings do not generate N(I): quotient has abelianization " + ab.str());
    CosetTable Tq = todd_coxeter(Nq, {}, budget);
    if (Tq.index() != 1)
      throw Error(ErrorKind::Test2Failed,
                  "fillings do not generate N(I): quotient has order " + std::to_string(Tq.index()));
  }

  // test 3
  PslQuotient Q(I);
  for (int i = 0; i < G.cusp_classes(); ++i) {
    std::vector<ProjKey> gens = {Q.key(word_matrix(G, G.peripherals[i].p1)),
                                 Q.key(word_matrix(G, G.peripherals[i].p2))};
    if (i == 0 && G.ell) gens.push_back(Q.key(word_matrix(G, *G.ell)));
    std::vector<ProjKey> H = subgroup_closure(Q, gens);
    uint64_t want = R.bi_order / H.size();
    if (lists[i].size() != want)
      throw Error(ErrorKind::Test3Failed, "class " + std::to_string(i + 1) + " lists " +
                                              std::to_string(lists[i].size()) + " fillings but has " +
                                              std::to_string(want) + " cusps");
    std::map<ProjKey, size_t> seen;
    for (size_t j = 0; j < lists[i].size(); ++j) {
      ProjKey k = left_coset_key(Q, Q.key(word_matrix(G, lists[i][j].g)), H);
      auto [it, fresh] = seen.emplace(k, j);
      if (!fresh)
        throw Error(ErrorKind::Test3Failed, "class " + std::to_string(i + 1) + ": " +
                                                G.format(lists[i][it->second].g) + " and " +
                                                G.format(lists[i][j].g) + " give the same cusp");
    }
    R.cusps_per_class.push_back((int)lists[i].size());
    R.cusps += (int)lists[i].size();
  }
  R.verdict = std::to_string(R.cusps) + "-Link";
  return R;
}

namespace {

bool fillings_generate(const Presentation& N, size_t budget) {
  Presentation Nq = tietze_simplify(N);
  if (Nq.ngens() == 0) return true;
  if (!abelian_invariants(Nq).trivial()) return false;
  try {
    return todd_coxeter(Nq, {}, budget).index() == 1;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::BudgetExceeded) return false;
    throw;
  }
}

}  // namespace

std::optional<LinkCertificate> search_certificate(int64_t d, const QuadIdeal& I, size_t budget, int max_attempts) {
  BianchiGroup G = bianchi_data(d);
  const int h = G.cusp_classes();
  std::vector<PeripheralTriple> ts;
  for (int i = 0; i < h; ++i) ts.push_back(find_peripheral_triple(G, I, i));
  CosetTable T = todd_coxeter(build_BI(G, ts), {}, budget);
  if ((uint64_t)T.index() != psl_order(I)) return std::nullopt;

  // shortest word for every element of B(I)
  std::vector<Word> word_of(T.index());
  std::vector<char> seen(T.index(), 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    for (int g = 1; g <= G.presentation.ngens(); ++g)
      for (int x : {g, -g}) {
        int e = T.act(c, x);
        if (seen[e]) continue;
        seen[e] = 1;
        word_of[e] = word_of[c];
        word_of[e].push_back(x);
        queue.push_back(e);
      }
  }
  std::vector<int> order(T.index());
  for (int c = 0; c < T.index(); ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return word_of[x].size() < word_of[y].size(); });

  PslQuotient Q(I);
  std::vector<std::vector<Word>> reps(h);
  for (int i = 0; i < h; ++i) {
    std::vector<ProjKey> gens = {Q.key(word_matrix(G, G.peripherals[i].p1)),
                                 Q.key(word_matrix(G, G.peripherals[i].p2))};
    if (i == 0 && G.ell) gens.push_back(Q.key(word_matrix(G, *G.ell)));
    std::vector<ProjKey> H = subgroup_closure(Q, gens);
    std::set<ProjKey> used;
    for (int c : order)
      if (used.insert(left_coset_key(Q, Q.key(word_matrix(G, word_of[c])), H)).second) reps[i].push_back(word_of[c]);
  }

  SchreierResult S = reidemeister_schreier(G.presentation, T);
  // primitive (p,q) up to sign with |p|, |q| <= 3, small ones first
  std::vector<std::pair<int64_t, int64_t>> candidates;
  for (int64_t m = 1; m <= 3; ++m)
    for (int64_t p = 0; p <= m; ++p)
      for (int64_t q = -m; q <= m; ++q) {
        if (std::max(p, std::abs(q)) != m || std::gcd(p, q) != 1 || (p == 0 && q < 0)) continue;
        candidates.push_back({p, q});
      }
  LinkCertificate c;
  c.d = d;
  c.ideal_gens = ideal_generators(I);
  c.triples = ts;
  c.expected_order = psl_order(I);
  c.fillings.resize(h);
  // greedy: each cusp takes the coefficients that shrink the abelianization most
  Presentation N = S.presentation;
  int attempts = 0;
  for (int i = 0; i < h; ++i)
    for (const Word& g : reps[i]) {
      Word best_w;
      Filling best_f;
      std::pair<int, mpz_class> best_score{-1, 0};
      for (auto [p, q] : candidates) {
        if (++attempts > max_attempts * 64) return std::nullopt;
        Filling f{g, p, q};
        Word w = S.rewrite(filling_word(G, i, ts[i], f));
        N.relators.push_back(w);
        AbelianGroup ab = abelian_invariants(N);
        N.relators.pop_back();
        std::pair<int, mpz_class> score{ab.rank, ab.rank ? mpz_class(0) : ab.order()};
        if (best_score.first < 0 || score < best_score) {
          best_score = score;
          best_w = w;
          best_f = f;
        }
      }
      N.relators.push_back(best_w);
      c.fillings[i].push_back(best_f);
    }
  if (!fillings_generate(N, budget)) return std::nullopt;
  verify_link(c, budget);
  return c;
}

Link2Report verify_link2(int64_t d, const std::vector<std::pair<int64_t, int64_t>>& pq, uint64_t expected_order,
                         size_t budget) {
  if (d == 1 || d == 3) throw Error(ErrorKind::UnsupportedD, "VerifyLink2 does not apply to d=1 and d=3");
  BianchiGroup G = bianchi_data(d);
  if ((int)pq.size() != G.cusp_classes())
    throw Error(ErrorKind::UsageError, "expected " + std::to_string(G.cusp_classes()) + " coefficient pairs");
  Presentation Q = G.presentation;
  for (int i = 0; i < G.cusp_classes(); ++i) {
    const PeripheralPair& P = G.peripherals[i];
    Word r = word_concat(word_pow(P.p1, pq[i].first), word_pow(P.p2, pq[i].second));
    if (!r.empty()) Q.relators.push_back(r);
  }
  Link2Report R;
  R.order = (uint64_t)todd_coxeter(Q, {}, budget).index();
  if (R.order != expected_order)
    throw Error(ErrorKind::OrderMismatch,
                "quotient has order " + std::to_string(R.order) + ", expected " + std::to_string(expected_order));
  for (int i = 0; i < G.cusp_classes(); ++i)
    R.cusps += todd_coxeter(Q, {G.peripherals[i].p1, G.peripherals[i].p2}, budget).index();
  R.verdict = std::to_string(R.cusps) + "-Link";
  return R;
}

}  // namespace bianchi
