#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bianchi/bianchi_data.hpp"

namespace bianchi {

struct Filling {
  Word g;
  int64_t p = 0, q = 0;
};

using FillingLists = std::vector<std::vector<Filling>>;  // one list per cusp class

struct ExpandShorthand {
  std::vector<Word> g;
  std::vector<std::vector<std::pair<int64_t, int64_t>>> pq;  // [class][index into g]
};

struct SymmetryShorthand {
  Word s;
  int order = 1;
  FillingLists fixed, moved;
};

struct Link2Data {
  std::vector<std::pair<int64_t, int64_t>> pq;
  uint64_t expected_order = 0;
};

struct LinkCertificate {
  int64_t d = 0;
  std::vector<QuadInt> ideal_gens;
  std::vector<PeripheralTriple> triples;
  uint64_t expected_order = 0;
  FillingLists fillings;
  std::optional<ExpandShorthand> expand;
  std::optional<SymmetryShorthand> symmetry;
  std::optional<Link2Data> link2;

  QuadIdeal ideal() const;
};

LinkCertificate parse_certificate(const std::string& json_text);
LinkCertificate load_certificate(const std::string& path);
std::string certificate_to_json(const LinkCertificate& cert);

// Explicit fillings followed by the Expand and Symmetrize shorthands.
FillingLists expand_certificate(const LinkCertificate& cert);

// g (p1^n)^p (p1^k p2^l)^q g^-1
Word filling_word(const BianchiGroup& G, int cusp, PeripheralTriple t, const Filling& f);

struct LinkReport {
  std::string verdict;  // "c-Link"
  int cusps = 0;
  std::vector<int> cusps_per_class;
  uint64_t bi_order = 0;
  uint64_t psl_order = 0;
  int n_schreier_gens = 0;
  int n_gens_after_tietze = 0;
};

// Tests 1, 2 and 3 in that order; throws Test1Failed / Test2Failed / Test3Failed.
LinkReport verify_link(const LinkCertificate& cert, size_t budget = kDefaultCosetBudget);

// Tries uniform filling coefficients per cusp class on shortest coset representatives;
// returns a certificate that verify_link accepts, or nothing.
std::optional<LinkCertificate> search_certificate(int64_t d, const QuadIdeal& I, size_t budget = kDefaultCosetBudget,
                                                  int max_attempts = 64);

struct Link2Report {
  std::string verdict;
  uint64_t order = 0;
  int cusps = 0;
};

Link2Report verify_link2(int64_t d, const std::vector<std::pair<int64_t, int64_t>>& pq, uint64_t expected_order,
                         size_t budget = kDefaultCosetBudget);

}  // namespace bianchi
