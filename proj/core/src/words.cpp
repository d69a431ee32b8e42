#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "bianchi/errors.hpp"
#include "bianchi/fpgroups.hpp"

namespace bianchi {

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (int x : w) {
    if (x == 0) continue;
    if (!out.empty() && out.back() == -x) out.pop_back();
    else out.push_back(x);
  }
  return out;
}

Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == -r[j - 1]) {
    ++i;
    --j;
  }
  return Word(r.begin() + i, r.begin() + j);
}

Word word_inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (int& x : r) x = -x;
  return r;
}

Word word_concat(const Word& x, const Word& y) {
  Word r = x;
  r.insert(r.end(), y.begin(), y.end());
  return free_reduce(r);
}

Word word_pow(const Word& w, int64_t k) {
  Word base = k < 0 ? word_inverse(w) : w;
  Word r;
  for (int64_t i = 0; i < (k < 0 ? -k : k); ++i) r.insert(r.end(), base.begin(), base.end());
  return free_reduce(r);
}

Word word_commutator(const Word& x, const Word& y) {
  Word r = word_inverse(x);
  Word yi = word_inverse(y);
  r.insert(r.end(), yi.begin(), yi.end());
  r.insert(r.end(), x.begin(), x.end());
  r.insert(r.end(), y.begin(), y.end());
  return free_reduce(r);
}

int Presentation::gen_index(const std::string& name) const {
  for (size_t i = 0; i < gens.size(); ++i)
    if (gens[i] == name) return (int)i;
  return -1;
}

size_t Presentation::total_length() const {
  size_t n = 0;
  for (const Word& r : relators) n += r.size();
  return n;
}

namespace {

class WordParser {
 public:
  WordParser(const std::string& s, const std::vector<std::string>& gens) : s_(s), gens_(gens) {}

  Word parse() {
    Word w = word();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return free_reduce(w);
  }

 private:
  const std::string& s_;
  const std::vector<std::string>& gens_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) {
    throw Error(ErrorKind::ParseError, "word '" + s_ + "': " + why + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Word word() {
    Word w = factor();
    while (eat('*')) {
      Word f = factor();
      w.insert(w.end(), f.begin(), f.end());
    }
    return w;
  }

  int64_t exponent() {
    skip();
    size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
    if (pos_ == start || !std::isdigit((unsigned char)s_[pos_ - 1])) fail("expected integer exponent");
    return std::stoll(s_.substr(start, pos_ - start));
  }

  Word powered(Word base) {
    if (eat('^')) return word_pow(base, exponent());
    return base;
  }

  Word factor() {
    skip();
    if (eat('(')) {
      Word w = word();
      if (eat(',')) {
        // Magma commutator (x,y)
        Word y = word();
        if (!eat(')')) fail("expected ')'");
        return powered(word_commutator(w, y));
      }
      if (!eat(')')) fail("expected ')'");
      return powered(w);
    }
    if (eat('[')) {
      Word x = word();
      if (!eat(',')) fail("expected ','");
      Word y = word();
      if (!eat(']')) fail("expected ']'");
      return powered(word_commutator(x, y));
    }
    size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '1') {
      ++pos_;
      return powered({});
    }
    while (pos_ < s_.size() && (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_')) ++pos_;
    if (pos_ == start) fail("expected generator");
    std::string name = s_.substr(start, pos_ - start);
    if (name == "Id") {
      // Magma style Id(G)
      if (eat('(')) {
        while (pos_ < s_.size() && s_[pos_] != ')') ++pos_;
        if (!eat(')')) fail("expected ')'");
      }
      return powered({});
    }
    auto it = std::find(gens_.begin(), gens_.end(), name);
    if (it == gens_.end()) fail("unknown generator '" + name + "'");
    return powered({(int)(it - gens_.begin()) + 1});
  }
};

}  // namespace

Word parse_word(const std::string& text, const std::vector<std::string>& gens) {
  return WordParser(text, gens).parse();
}

std::string format_word(const Word& w, const std::vector<std::string>& gens) {
  if (w.empty()) return "Id";
  std::string out;
  size_t i = 0;
  while (i < w.size()) {
    size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    int g = std::abs(w[i]) - 1;
    long e = (long)(j - i) * (w[i] > 0 ? 1 : -1);
    if (!out.empty()) out += "*";
    out += (g < (int)gens.size()) ? gens[g] : "x" + std::to_string(g + 1);
    if (e != 1) out += "^" + std::to_string(e);
    i = j;
  }
  return out;
}

AbelianGroup abelian_invariants(const Presentation& P) {
  SparseIntMatrix M((int)P.relators.size(), P.ngens());
  for (size_t r = 0; r < P.relators.size(); ++r)
    for (int x : P.relators[r]) M.add((int)r, std::abs(x) - 1, x > 0 ? 1 : -1);
  M.normalize();
  SnfResult s = smith_normal_form(M);
  AbelianGroup g;
  g.rank = P.ngens() - s.rank;
  g.divisors = s.divisors;
  return g;
}

namespace {

// Canonical form of a cyclic word up to rotation and inversion.
Word cyclic_canonical(const Word& w) {
  Word best;
  for (const Word& v : {w, word_inverse(w)}) {
    for (size_t k = 0; k < v.size(); ++k) {
      Word r(v.begin() + k, v.end());
      r.insert(r.end(), v.begin(), v.begin() + k);
      if (best.empty() || r < best) best = r;
    }
  }
  return best;
}

void tidy(std::vector<Word>& rels) {
  std::set<Word> seen;
  std::vector<Word> out;
  for (Word& r : rels) {
    r = cyclic_reduce(r);
    if (r.empty()) continue;
    if (seen.insert(cyclic_canonical(r)).second) out.push_back(r);
  }
  rels = std::move(out);
}

Word substitute(const Word& r, int g, const Word& value) {
  Word out;
  Word inv = word_inverse(value);
  for (int x : r) {
    if (std::abs(x) - 1 == g) {
      const Word& v = x > 0 ? value : inv;
      out.insert(out.end(), v.begin(), v.end());
    } else {
      out.push_back(x);
    }
  }
  return free_reduce(out);
}

}  // namespace

Presentation tietze_simplify(const Presentation& P, TietzeStats* stats) {
  TietzeStats st;
  st.gens_before = P.ngens();
  st.length_before = P.total_length();
  std::vector<Word> rels = P.relators;
  std::vector<char> alive(P.ngens(), 1);
  const size_t cap = std::max<size_t>(2 * st.length_before + 100, 1000);
  tidy(rels);
  for (;;) {
    // occurrences of each generator in each relator
    int best_g = -1;
    size_t best_r = 0;
    long best_growth = 0;
    std::vector<size_t> total(P.ngens(), 0);
    for (const Word& r : rels)
      for (int x : r) ++total[std::abs(x) - 1];
    size_t length = 0;
    for (const Word& r : rels) length += r.size();
    for (size_t ri = 0; ri < rels.size(); ++ri) {
      const Word& r = rels[ri];
      std::map<int, int> cnt;
      for (int x : r) ++cnt[std::abs(x) - 1];
      for (auto [g, c] : cnt) {
        if (c != 1) continue;
        long others = (long)total[g] - 1;
        long growth = others * ((long)r.size() - 2) - (long)r.size();
        if (best_g < 0 || growth < best_growth || (growth == best_growth && r.size() < rels[best_r].size())) {
          best_g = g;
          best_r = ri;
          best_growth = growth;
        }
      }
    }
    if (best_g < 0) break;
    if (best_growth > 0 && length + best_growth > cap) break;
    // solve r = 1 for the generator
    Word r = rels[best_r];
    size_t pos = 0;
    while (std::abs(r[pos]) - 1 != best_g) ++pos;
    Word after(r.begin() + pos + 1, r.end());
    Word before(r.begin(), r.begin() + pos);
    // r = before * x^e * after  =>  x^e = before^-1 after^-1
    Word value = word_concat(word_inverse(before), word_inverse(after));
    if (r[pos] < 0) value = word_inverse(value);
    rels.erase(rels.begin() + best_r);
    for (Word& w : rels) w = substitute(w, best_g, value);
    alive[best_g] = 0;
    tidy(rels);
  }
  // renumber surviving generators
  std::vector<int> remap(P.ngens(), -1);
  Presentation out;
  for (int g = 0; g < P.ngens(); ++g)
    if (alive[g]) {
      remap[g] = out.ngens();
      out.gens.push_back(P.gens[g]);
    }
  for (const Word& r : rels) {
    Word w;
    for (int x : r) {
      int g = remap[std::abs(x) - 1];
      if (g < 0) throw Error(ErrorKind::InconsistentGluing, "eliminated generator survived substitution");
      w.push_back(x > 0 ? g + 1 : -(g + 1));
    }
    out.relators.push_back(w);
  }
  st.gens_after = out.ngens();
  st.length_after = out.total_length();
  if (stats) *stats = st;
  return out;
}

}  // namespace bianchi
