#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bianchi/homology.hpp"

namespace bianchi {

// Letters are +(g+1) for generator g and -(g+1) for its inverse.
using Word = std::vector<int>;

Word free_reduce(const Word& w);
Word cyclic_reduce(const Word& w);
Word word_inverse(const Word& w);
Word word_concat(const Word& x, const Word& y);
Word word_pow(const Word& w, int64_t k);
Word word_commutator(const Word& x, const Word& y);  // x^-1 y^-1 x y

struct Presentation {
  std::vector<std::string> gens;
  std::vector<Word> relators;

  int ngens() const { return (int)gens.size(); }
  int gen_index(const std::string& name) const;  // -1 when unknown
  size_t total_length() const;
};

// word := factor ("*" factor)*; factor := gen ("^" int)? | "(" word ")" ("^" int)? | "[" word "," word "]"
// "Id" and "1" denote the identity; "(x,y)" is accepted as a synonym of "[x,y]".
Word parse_word(const std::string& text, const std::vector<std::string>& gens);
std::string format_word(const Word& w, const std::vector<std::string>& gens);

class CosetTable {
 public:
  CosetTable() = default;
  CosetTable(int ngens, std::vector<int32_t> rows, int index);

  int ngens() const { return ngens_; }
  int index() const { return index_; }
  bool complete() const { return complete_; }
  // Coset reached from c by one letter.
  int act(int c, int letter) const { return rows_[(size_t)c * 2 * ngens_ + column(letter)]; }
  int trace(int c, const Word& w) const;
  static int column(int letter) { return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1; }

 private:
  int ngens_ = 0;
  int index_ = 0;
  bool complete_ = false;
  std::vector<int32_t> rows_;
};

struct TcStats {
  size_t defined = 0;
  size_t max_live = 0;
  size_t lookaheads = 0;
  size_t coincidences = 0;
};

constexpr size_t kDefaultCosetBudget = 4000000;

// HLT enumeration with lookahead; throws BudgetExceeded when live cosets would exceed the budget.
CosetTable todd_coxeter(const Presentation& P, const std::vector<Word>& subgroup,
                        size_t budget = kDefaultCosetBudget, TcStats* stats = nullptr);

// Checks relators and subgroup generators against a complete table.
bool verify_coset_table(const CosetTable& T, const Presentation& P, const std::vector<Word>& subgroup);

AbelianGroup abelian_invariants(const Presentation& P);

struct SchreierResult {
  Presentation presentation;
  // Schreier generator for (coset, generator), or -1 on the spanning tree.
  std::vector<int> gen_of;
  int ngens_ambient = 0;
  CosetTable table;

  // Rewrites a word read from coset `start`; *end receives the final coset.
  Word rewrite_from(int start, const Word& w, int* end) const;
  // Rewrites a word of the subgroup (must return to coset 0).
  Word rewrite(const Word& w) const;
};

SchreierResult reidemeister_schreier(const Presentation& P, const CosetTable& table);

struct TietzeStats {
  int gens_before = 0, gens_after = 0;
  size_t length_before = 0, length_after = 0;
};

// Eliminates generators occurring once in a relator; keeps total length bounded.
Presentation tietze_simplify(const Presentation& P, TietzeStats* stats = nullptr);

}  // namespace bianchi
