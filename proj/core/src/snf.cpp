#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

#include "bianchi/errors.hpp"
#include "bianchi/homology.hpp"

namespace bianchi {

void SparseIntMatrix::add(int r, int c, const mpz_class& v) {
  if (r < 0 || r >= rows || c < 0 || c >= cols) throw Error(ErrorKind::InconsistentGluing, "matrix index out of range");
  if (v != 0) entries.push_back({r, c, v});
}

void SparseIntMatrix::normalize() {
  std::map<std::pair<int, int>, mpz_class> acc;
  for (const Entry& e : entries) acc[{e.row, e.col}] += e.value;
  entries.clear();
  for (auto& [pos, v] : acc)
    if (v != 0) entries.push_back({pos.first, pos.second, v});
}

std::vector<std::vector<mpz_class>> SparseIntMatrix::dense() const {
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols, 0));
  for (const Entry& e : entries) a[e.row][e.col] += e.value;
  return a;
}

SparseIntMatrix SparseIntMatrix::from_dense(const std::vector<std::vector<mpz_class>>& a) {
  SparseIntMatrix m((int)a.size(), a.empty() ? 0 : (int)a[0].size());
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (a[i][j] != 0) m.entries.push_back({i, j, a[i][j]});
  return m;
}

SparseIntMatrix SparseIntMatrix::multiply(const SparseIntMatrix& b) const {
  if (cols != b.rows) throw Error(ErrorKind::InconsistentGluing, "matrix dimensions do not match");
  std::vector<std::vector<const Entry*>> brow(b.rows);
  for (const Entry& e : b.entries) brow[e.row].push_back(&e);
  SparseIntMatrix out(rows, b.cols);
  for (const Entry& e : entries)
    for (const Entry* f : brow[e.col]) out.entries.push_back({e.row, f->col, e.value * f->value});
  out.normalize();
  return out;
}

bool SparseIntMatrix::is_zero() const {
  for (const Entry& e : entries)
    if (e.value != 0) return false;
  return true;
}

std::vector<mpz_class> dense_smith_diagonal(std::vector<std::vector<mpz_class>> a) {
  const size_t m = a.size(), n = m ? a[0].size() : 0;
  std::vector<mpz_class> diag;
  for (size_t k = 0; k < std::min(m, n); ++k) {
    for (;;) {
      // smallest nonzero entry of the remaining block
      size_t pi = m, pj = n;
      for (size_t i = k; i < m; ++i)
        for (size_t j = k; j < n; ++j)
          if (a[i][j] != 0 && (pi == m || abs(a[i][j]) < abs(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == m) return diag;
      std::swap(a[k], a[pi]);
      for (size_t i = 0; i < m; ++i) std::swap(a[i][k], a[i][pj]);
      bool clean = true;
      mpz_class q;
      for (size_t i = k + 1; i < m; ++i) {
        if (a[i][k] == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a[i][k].get_mpz_t(), a[k][k].get_mpz_t());
        for (size_t j = k; j < n; ++j)
          if (a[k][j] != 0) a[i][j] -= q * a[k][j];
        if (a[i][k] != 0) clean = false;
      }
      for (size_t j = k + 1; j < n; ++j) {
        if (a[k][j] == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a[k][j].get_mpz_t(), a[k][k].get_mpz_t());
        for (size_t i = k; i < m; ++i)
          if (a[i][k] != 0) a[i][j] -= q * a[i][k];
        if (a[k][j] != 0) clean = false;
      }
      if (!clean) continue;
      // pivot must divide the rest of the block
      bool divides = true;
      for (size_t i = k + 1; i < m && divides; ++i)
        for (size_t j = k + 1; j < n; ++j)
          if (a[i][j] != 0 && !mpz_divisible_p(a[i][j].get_mpz_t(), a[k][k].get_mpz_t())) {
            for (size_t jj = k; jj < n; ++jj) a[k][jj] += a[i][jj];
            divides = false;
            break;
          }
      if (divides) break;
    }
    diag.push_back(abs(a[k][k]));
  }
  return diag;
}

namespace {

using Row = std::vector<std::pair<int, int64_t>>;

bool axpy(const Row& x, int64_t f, const Row& y, Row& out) {
  // out = x - f*y
  out.clear();
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else {
      int64_t prod, v;
      if (__builtin_mul_overflow(f, y[j].second, &prod)) return false;
      if (i < x.size() && x[i].first == y[j].first) {
        if (__builtin_sub_overflow(x[i].second, prod, &v)) return false;
        ++i;
      } else {
        if (__builtin_sub_overflow((int64_t)0, prod, &v)) return false;
      }
      if (v != 0) out.push_back({y[j].first, v});
      ++j;
    }
  }
  return true;
}

const int64_t* find_col(const Row& r, int c) {
  auto it = std::lower_bound(r.begin(), r.end(), std::make_pair(c, INT64_MIN));
  if (it == r.end() || it->first != c) return nullptr;
  return &it->second;
}

}  // namespace

SnfResult smith_normal_form(const SparseIntMatrix& A) {
  SnfResult res;
  SparseIntMatrix M = A;
  M.normalize();
  bool fits = true;
  for (const auto& e : M.entries) fits = fits && e.value.fits_slong_p();
  std::vector<Row> rows(M.rows);
  std::vector<char> live(M.rows, 1);
  if (fits) {
    for (const auto& e : M.entries) rows[e.row].push_back({e.col, e.value.get_si()});
    for (Row& r : rows) std::sort(r.begin(), r.end());
    std::vector<std::vector<int>> colrows(M.cols);
    for (int i = 0; i < M.rows; ++i)
      for (auto& [c, v] : rows[i]) colrows[c].push_back(i);
    using QI = std::pair<size_t, int>;  // (row length, row)
    std::priority_queue<QI, std::vector<QI>, std::greater<QI>> pq;
    for (int i = 0; i < M.rows; ++i)
      if (!rows[i].empty()) pq.push({rows[i].size(), i});
    Row tmp;
    bool stop = false;
    while (!pq.empty() && !stop) {
      auto [len, r] = pq.top();
      pq.pop();
      if (!live[r] || rows[r].size() != len || len == 0) continue;
      // unit entry with fewest column companions
      int best = -1;
      size_t best_cost = SIZE_MAX;
      for (auto& [c, v] : rows[r]) {
        if (v != 1 && v != -1) continue;
        std::vector<int>& cr = colrows[c];
        cr.erase(std::remove_if(cr.begin(), cr.end(), [&](int i) { return !live[i] || !find_col(rows[i], c); }),
                 cr.end());
        size_t cost = (cr.size() - 1) * (len - 1);
        if (cost < best_cost) {
          best_cost = cost;
          best = c;
        }
      }
      if (best < 0) continue;  // revisited when the row changes
      int64_t s = *find_col(rows[r], best);
      live[r] = 0;
      for (int i : colrows[best]) {
        if (i == r || !live[i]) continue;
        const int64_t* a = find_col(rows[i], best);
        if (!a) continue;
        if (!axpy(rows[i], *a * s, rows[r], tmp)) {
          res.overflowed = true;
          stop = true;
          break;
        }
        for (auto& [c, v] : tmp)
          if (!find_col(rows[i], c)) colrows[c].push_back(i);
        rows[i].swap(tmp);
        if (!rows[i].empty()) pq.push({rows[i].size(), i});
      }
      if (stop) {
        live[r] = 1;
        break;
      }
      ++res.rank;
      ++res.sparse_pivots;
      rows[r].clear();
    }
  }
  // residual block
  std::vector<std::vector<mpz_class>> dense;
  std::map<int, int> colmap;
  if (fits) {
    for (int i = 0; i < M.rows; ++i)
      if (live[i] && !rows[i].empty())
        for (auto& [c, v] : rows[i]) colmap.emplace(c, 0);
    int k = 0;
    for (auto& [c, idx] : colmap) idx = k++;
    for (int i = 0; i < M.rows; ++i) {
      if (!live[i] || rows[i].empty()) continue;
      std::vector<mpz_class> row(colmap.size(), 0);
      for (auto& [c, v] : rows[i]) row[colmap[c]] = mpz_class((long)v);
      dense.push_back(std::move(row));
    }
  } else {
    dense = M.dense();
  }
  res.residual_rows = (int)dense.size();
  res.residual_cols = dense.empty() ? 0 : (int)dense[0].size();
  std::vector<mpz_class> diag = dense_smith_diagonal(std::move(dense));
  // gcd/lcm sweep gives the divisibility chain
  for (size_t i = 0; i < diag.size(); ++i)
    for (size_t j = i + 1; j < diag.size(); ++j) {
      mpz_class g = gcd(diag[i], diag[j]);
      mpz_class l = diag[i] / g * diag[j];
      diag[i] = g;
      diag[j] = l;
    }
  res.rank += (int)diag.size();
  for (const mpz_class& x : diag)
    if (x > 1) res.divisors.push_back(x);
  return res;
}

mpz_class AbelianGroup::order() const {
  if (rank > 0) throw Error(ErrorKind::UsageError, "infinite group has no finite order");
  mpz_class o = 1;
  for (const auto& d : divisors) o *= d;
  return o;
}

std::string AbelianGroup::str() const {
  if (trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (rank > 0) {
    os << "Z";
    if (rank > 1) os << "^" << rank;
    first = false;
  }
  for (const auto& d : divisors) {
    if (!first) os << " + ";
    os << "Z/" << d.get_str();
    first = false;
  }
  return os.str();
}

AbelianGroup AbelianGroup::from_cyclic(int free_rank, std::vector<mpz_class> orders) {
  AbelianGroup g;
  g.rank = free_rank;
  std::vector<mpz_class> tors;
  for (auto& o : orders) {
    o = abs(o);
    if (o == 0) ++g.rank;
    else if (o > 1) tors.push_back(o);
  }
  for (size_t i = 0; i < tors.size(); ++i)
    for (size_t j = i + 1; j < tors.size(); ++j) {
      mpz_class gg = gcd(tors[i], tors[j]);
      mpz_class l = tors[i] / gg * tors[j];
      tors[i] = gg;
      tors[j] = l;
    }
  for (auto& t : tors)
    if (t > 1) g.divisors.push_back(t);
  return g;
}

AbelianGroup AbelianGroup::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s == "0" || s.empty()) return {};
  int rank = 0;
  std::vector<mpz_class> orders;
  std::stringstream ss(s);
  std::string term;
  while (std::getline(ss, term, '+')) {
    if (term.rfind("Z/", 0) == 0) {
      orders.emplace_back(term.substr(2));
    } else if (term == "Z") {
      ++rank;
    } else if (term.rfind("Z^", 0) == 0) {
      rank += std::stoi(term.substr(2));
    } else {
      throw Error(ErrorKind::ParseError, "bad abelian group term '" + term + "'");
    }
  }
  return from_cyclic(rank, orders);
}

AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b) {
  std::vector<mpz_class> o = a.divisors;
  o.insert(o.end(), b.divisors.begin(), b.divisors.end());
  return AbelianGroup::from_cyclic(a.rank + b.rank, o);
}

}  // namespace bianchi
