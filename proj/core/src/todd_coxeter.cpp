#include <algorithm>

#include "bianchi/errors.hpp"
#include "bianchi/fpgroups.hpp"

namespace bianchi {

CosetTable::CosetTable(int ngens, std::vector<int32_t> rows, int index)
    : ngens_(ngens), index_(index), complete_(true), rows_(std::move(rows)) {}

int CosetTable::trace(int c, const Word& w) const {
  for (int x : w) {
    if (c < 0) return -1;
    c = act(c, x);
  }
  return c;
}

namespace {

class Enumerator {
 public:
  Enumerator(const Presentation& P, size_t budget) : ncols_(2 * P.ngens()), budget_(budget) {
    for (const Word& r : P.relators) {
      std::vector<int> cols;
      for (int x : free_reduce(r)) cols.push_back(CosetTable::column(x));
      if (!cols.empty()) rels_.push_back(cols);
    }
    new_coset();
  }

  void run(const std::vector<Word>& subgroup) {
    std::vector<std::vector<int>> sub;
    for (const Word& h : subgroup) {
      std::vector<int> cols;
      for (int x : free_reduce(h)) cols.push_back(CosetTable::column(x));
      if (!cols.empty()) sub.push_back(cols);
    }
    for (size_t i = 0; i < sub.size();)
      if (scan_and_fill(0, sub[i])) ++i;
    cur_ = 0;
    while (cur_ < (int)fwd_.size()) {
      int c = cur_;
      if (fwd_[c] != c) {
        ++cur_;
        continue;
      }
      bool restart = false;
      for (size_t r = 0; r < rels_.size() && alive(c); ++r)
        if (!scan_and_fill(c, rels_[r])) {
          restart = true;
          break;
        }
      if (restart) continue;  // cur_ may have moved through compaction
      if (!alive(c)) {
        ++cur_;
        continue;
      }
      for (int x = 0; x < ncols_ && alive(c); ++x)
        if (at(c, x) < 0 && !define(c, x)) {
          restart = true;
          break;
        }
      if (!restart) ++cur_;
    }
  }

  CosetTable result() {
    compact();
    return CosetTable(ncols_ / 2, tab_, (int)fwd_.size());
  }

  TcStats stats;

 private:
  int ncols_;
  size_t budget_;
  std::vector<std::vector<int>> rels_;
  std::vector<int32_t> tab_;
  std::vector<int32_t> fwd_;
  size_t live_ = 0;
  int cur_ = 0;
  std::vector<int> queue_;

  int32_t& at(int c, int x) { return tab_[(size_t)c * ncols_ + x]; }
  bool alive(int c) const { return fwd_[c] == c; }

  int new_coset() {
    int d = (int)fwd_.size();
    fwd_.push_back(d);
    tab_.insert(tab_.end(), ncols_, -1);
    ++live_;
    ++stats.defined;
    stats.max_live = std::max(stats.max_live, live_);
    return d;
  }

  // False when a lookahead ran; the caller restarts its scan.
  bool define(int c, int x) {
    if (live_ >= budget_) {
      lookahead();
      return false;
    }
    int d = new_coset();
    at(c, x) = d;
    at(d, x ^ 1) = c;
    return true;
  }

  int rep(int c) {
    int r = c;
    while (fwd_[r] != r) r = fwd_[r];
    while (fwd_[c] != r) {
      int n = fwd_[c];
      fwd_[c] = r;
      c = n;
    }
    return r;
  }

  void merge(int k, int l) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    if (k > l) std::swap(k, l);
    fwd_[l] = k;
    --live_;
    queue_.push_back(l);
  }

  void coincidence(int a, int b) {
    ++stats.coincidences;
    queue_.clear();
    merge(a, b);
    for (size_t i = 0; i < queue_.size(); ++i) {
      int e = queue_[i];
      for (int x = 0; x < ncols_; ++x) {
        int f = at(e, x);
        if (f < 0) continue;
        if (at(f, x ^ 1) == e) at(f, x ^ 1) = -1;
        int e1 = rep(e), f1 = rep(f);
        if (at(e1, x) >= 0) merge(f1, at(e1, x));
        else if (at(f1, x ^ 1) >= 0) merge(e1, at(f1, x ^ 1));
        else {
          at(e1, x) = f1;
          at(f1, x ^ 1) = e1;
        }
      }
    }
  }

  // Returns false if a lookahead interrupted the scan.
  bool scan_and_fill(int c, const std::vector<int>& w) {
    int f = c, b = c;
    int i = 0, j = (int)w.size() - 1;
    for (;;) {
      while (i <= j && at(f, w[i]) >= 0) f = at(f, w[i++]);
      if (i > j) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (j >= i && at(b, w[j] ^ 1) >= 0) b = at(b, w[j--] ^ 1);
      if (j < i) {
        coincidence(f, b);
        return true;
      }
      if (i == j) {
        at(f, w[i]) = b;
        at(b, w[i] ^ 1) = f;
        return true;
      }
      if (!define(f, w[i])) return false;
    }
  }

  void scan_only(int c, const std::vector<int>& w) {
    int f = c, b = c;
    int i = 0, j = (int)w.size() - 1;
    while (i <= j && at(f, w[i]) >= 0) f = at(f, w[i++]);
    if (i > j) {
      if (f != b) coincidence(f, b);
      return;
    }
    while (j >= i && at(b, w[j] ^ 1) >= 0) b = at(b, w[j--] ^ 1);
    if (j < i) coincidence(f, b);
    else if (i == j) {
      at(f, w[i]) = b;
      at(b, w[i] ^ 1) = f;
    }
  }

  void lookahead() {
    ++stats.lookaheads;
    size_t before = live_;
    for (int c = 0; c < (int)fwd_.size(); ++c)
      for (size_t r = 0; r < rels_.size() && alive(c); ++r) scan_only(c, rels_[r]);
    compact();
    if (live_ >= budget_ || before - live_ < std::max<size_t>(1, budget_ / 20))
      throw Error(ErrorKind::BudgetExceeded, "order not determined <= " + std::to_string(budget_) + " cosets");
  }

  void compact() {
    std::vector<int32_t> idx(fwd_.size(), -1);
    int n = 0;
    int new_cur = 0;
    for (int c = 0; c < (int)fwd_.size(); ++c) {
      if (c == cur_) new_cur = n;
      if (alive(c)) idx[c] = n++;
    }
    if (cur_ >= (int)fwd_.size()) new_cur = n;
    std::vector<int32_t> t((size_t)n * ncols_, -1);
    for (int c = 0; c < (int)fwd_.size(); ++c) {
      if (!alive(c)) continue;
      for (int x = 0; x < ncols_; ++x) {
        int d = at(c, x);
        t[(size_t)idx[c] * ncols_ + x] = d < 0 ? -1 : idx[rep(d)];
      }
    }
    tab_.swap(t);
    fwd_.resize(n);
    for (int c = 0; c < n; ++c) fwd_[c] = c;
    live_ = n;
    cur_ = new_cur;
  }
};

}  // namespace

CosetTable todd_coxeter(const Presentation& P, const std::vector<Word>& subgroup, size_t budget, TcStats* stats) {
  if (P.ngens() == 0) return CosetTable(0, {}, 1);
  Enumerator E(P, budget);
  E.run(subgroup);
  CosetTable T = E.result();
  if (stats) *stats = E.stats;
  for (int c = 0; c < T.index(); ++c)
    for (int x = 0; x < 2 * T.ngens(); ++x)
      if (T.act(c, x % 2 ? -(x / 2 + 1) : x / 2 + 1) < 0)
        throw Error(ErrorKind::IncompleteTable, "enumeration left undefined entries");
  if (!verify_coset_table(T, P, subgroup))
    throw Error(ErrorKind::IncompleteTable, "coset table fails verification");
  return T;
}

bool verify_coset_table(const CosetTable& T, const Presentation& P, const std::vector<Word>& subgroup) {
  for (int c = 0; c < T.index(); ++c) {
    for (int g = 1; g <= T.ngens(); ++g) {
      int d = T.act(c, g);
      if (d < 0 || T.act(d, -g) != c) return false;
    }
    for (const Word& r : P.relators)
      if (T.trace(c, r) != c) return false;
  }
  for (const Word& h : subgroup)
    if (T.trace(0, h) != 0) return false;
  return true;
}

}  // namespace bianchi
