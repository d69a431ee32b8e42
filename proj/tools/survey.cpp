#include <algorithm>
#include <tuple>

#include "bianchi/certificate.hpp"
#include "bianchi/errors.hpp"
#include "cli.hpp"
#include "pool.hpp"

namespace bianchi::cli {

namespace {

struct SpecialCase {
  int64_t d;
  const char* gen;
};

// Settled by external computations outside this artifact.
const SpecialCase kSpecial[] = {{1, "4+3*s"}, {3, "(11+s)/2"}, {2, "1+3*s"}};

bool is_special(const QuadIdeal& I) {
  for (const auto& sc : kSpecial) {
    if (sc.d != I.d) continue;
    QuadIdeal J = ideal_from_generators(I.d, {parse_quad_int(I.d, sc.gen)});
    if (I == J || ideal_conj(I) == J) return true;
  }
  return false;
}

bool key_less(const QuadIdeal& a, const QuadIdeal& b) {
  return std::make_tuple(a.n, a.k, a.l) < std::make_tuple(b.n, b.k, b.l);
}

// Smallest period of w read as a word; returns the exponent.
int power_of(const Word& w, Word& root) {
  const size_t n = w.size();
  for (size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (size_t i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
    if (ok) {
      root.assign(w.begin(), w.begin() + (long)p);
      return (int)(n / p);
    }
  }
  root = w;
  return 1;
}

}  // namespace

bool orbifold_by_relators(const BianchiGroup& G, const QuadIdeal& I) {
  PslQuotient Q(I);
  const ProjKey one = Q.identity();
  for (const Word& r : G.presentation.relators) {
    Word root;
    int k = power_of(cyclic_reduce(r), root);
    if (k < 2) continue;
    ProjKey x = Q.key(word_matrix(G, root)), acc = x;
    for (int j = 1; j < k; ++j) {
      if (acc == one) return true;
      acc = Q.mul(acc, x);
    }
  }
  return false;
}

SurveyRow survey_row(int64_t d, const QuadIdeal& I, size_t budget) {
  SurveyRow row;
  row.d = d;
  row.ideal = I;
  row.ideal_str = format_ideal(I);
  row.norm = I.norm();
  row.psl = psl_order(I);
  if (is_special(I)) {
    row.method = "special-case (external proof)";
    row.result = "not checked by this artifact";
    return row;
  }
  BianchiGroup G = bianchi_data(d);
  std::vector<PeripheralTriple> triples;
  for (int c = 0; c < G.cusp_classes(); ++c) triples.push_back(find_peripheral_triple(G, I, c));
  uint64_t order = 0;
  try {
    order = (uint64_t)todd_coxeter(build_BI(G, triples), {}, budget).index();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExceeded) throw;
    row.method = "not checked by this artifact";
    row.result = "order not determined <= " + std::to_string(budget) + " cosets";
    return row;
  }
  if (order > row.psl) {
    row.method = "Order";
    row.result = "|B(I)| = " + std::to_string(order);
    return row;
  }
  if (orbifold_by_relators(G, I)) {
    row.method = "Orbifold";
    row.result = "|B(I)| = " + std::to_string(order);
    return row;
  }
  if (auto cert = search_certificate(d, I, budget)) {
    LinkReport rep = verify_link(*cert, budget);
    row.method = "Certificate";
    row.result = rep.verdict;
    return row;
  }
  row.method = "Certificate search";
  row.result = "undecided";
  return row;
}

std::vector<SurveyRow> run_survey(const std::vector<int64_t>& ds, int64_t max_norm, size_t budget, int jobs) {
  std::vector<std::pair<int64_t, QuadIdeal>> work;
  for (int64_t d : ds) {
    if (!has_bianchi_data(d)) throw Error(ErrorKind::UnsupportedD, "no bundled presentation for d=" + std::to_string(d));
    for (const QuadIdeal& I : ideals_up_to_norm(d, max_norm)) {
      if (I.is_unit()) continue;
      QuadIdeal c = ideal_conj(I);
      if (key_less(c, I)) continue;
      work.emplace_back(d, I);
    }
  }
  std::vector<SurveyRow> rows(work.size());
  parallel_for(work.size(), jobs, [&](size_t i) {
    try {
      rows[i] = survey_row(work[i].first, work[i].second, budget);
    } catch (const Error& e) {
      SurveyRow& r = rows[i];
      r.d = work[i].first;
      r.ideal = work[i].second;
      r.ideal_str = format_ideal(r.ideal);
      r.norm = r.ideal.norm();
      r.psl = psl_order(r.ideal);
      r.method = "error";
      r.result = std::string(error_kind_name(e.kind())) + ": " + e.detail();
    }
  });
  std::stable_sort(rows.begin(), rows.end(), [](const SurveyRow& a, const SurveyRow& b) {
    return std::make_tuple(a.d, a.norm, a.ideal.n, a.ideal.k, a.ideal.l) <
           std::make_tuple(b.d, b.norm, b.ideal.n, b.ideal.k, b.ideal.l);
  });
  return rows;
}

}  // namespace bianchi::cli
