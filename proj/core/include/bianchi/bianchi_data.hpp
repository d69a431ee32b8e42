#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bianchi/fpgroups.hpp"
#include "bianchi/ring.hpp"

namespace bianchi {

struct PeripheralPair {
  Word p1, p2;
};

struct BianchiGroup {
  int64_t d = 0;
  Presentation presentation;
  std::vector<ProjMatrix> matrices;          // one per generator
  std::vector<PeripheralPair> peripherals;   // one per cusp class, index 0 is infinity
  std::optional<Word> ell;                   // d = 1, 3 only

  int cusp_classes() const { return (int)peripherals.size(); }
  Word parse(const std::string& text) const { return parse_word(text, presentation.gens); }
  std::string format(const Word& w) const { return format_word(w, presentation.gens); }
};

const std::vector<int64_t>& bundled_bianchi_d();
bool has_bianchi_data(int64_t d);
BianchiGroup bianchi_data(int64_t d);

ProjMatrix word_matrix(const BianchiGroup& G, const Word& w);

struct PeripheralTriple {
  int64_t n = 0, k = 0, l = 0;
};

// p1^n and p1^k p2^l are +-Id mod I and no smaller window point is.
bool validate_peripheral_triple(const BianchiGroup& G, const QuadIdeal& I, int cusp, PeripheralTriple t);
bool validate_peripheral_triple(int64_t d, const QuadIdeal& I, int cusp, PeripheralTriple t);

// Basis (n,0), (k,l) of the lattice of (s,t) with p1^s p2^t = +-Id mod I, 0 <= k < n.
PeripheralTriple find_peripheral_triple(const BianchiGroup& G, const QuadIdeal& I, int cusp);

// For d = 5, 6 a single triple is applied to every cusp class.
std::vector<PeripheralTriple> broadcast_triples(const BianchiGroup& G, const std::vector<PeripheralTriple>& triples);

// The two generators of P_i(I): p1^n and p1^k p2^l.
std::pair<Word, Word> peripheral_lattice(const BianchiGroup& G, int cusp, PeripheralTriple t);

Presentation build_BI(const BianchiGroup& G, const std::vector<PeripheralTriple>& triples);
Presentation build_BI(int64_t d, const std::vector<PeripheralTriple>& triples);

}  // namespace bianchi
