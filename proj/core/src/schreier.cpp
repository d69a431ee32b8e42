#include <deque>

#include "bianchi/errors.hpp"
#include "bianchi/fpgroups.hpp"

namespace bianchi {

Word SchreierResult::rewrite_from(int start, const Word& w, int* end) const {
  Word out;
  int c = start;
  for (int x : w) {
    int g = std::abs(x) - 1;
    if (x > 0) {
      int s = gen_of[(size_t)c * ngens_ambient + g];
      if (s >= 0) out.push_back(s + 1);
      c = table.act(c, x);
    } else {
      int d = table.act(c, x);
      int s = gen_of[(size_t)d * ngens_ambient + g];
      if (s >= 0) out.push_back(-(s + 1));
      c = d;
    }
  }
  if (end) *end = c;
  return free_reduce(out);
}

Word SchreierResult::rewrite(const Word& w) const {
  int end = 0;
  Word r = rewrite_from(0, w, &end);
  if (end != 0) throw Error(ErrorKind::UsageError, "word does not lie in the subgroup");
  return r;
}

SchreierResult reidemeister_schreier(const Presentation& P, const CosetTable& table) {
  const int n = P.ngens();
  const int index = table.index();
  SchreierResult R;
  R.ngens_ambient = n;
  R.table = table;
  R.gen_of.assign((size_t)index * n, -1);

  // spanning tree by BFS in column order; tree[c*n+g] marks the edge c --g--> act(c,g)
  std::vector<char> seen(index, 0), tree((size_t)index * n, 0);
  std::deque<int> q{0};
  seen[0] = 1;
  while (!q.empty()) {
    int c = q.front();
    q.pop_front();
    for (int col = 0; col < 2 * n; ++col) {
      int g = col / 2;
      int letter = col % 2 ? -(g + 1) : g + 1;
      int d = table.act(c, letter);
      if (seen[d]) continue;
      seen[d] = 1;
      q.push_back(d);
      if (letter > 0) tree[(size_t)c * n + g] = 1;
      else tree[(size_t)d * n + g] = 1;
    }
  }
  for (int c = 0; c < index; ++c)
    if (!seen[c]) throw Error(ErrorKind::IncompleteTable, "coset table is not connected");

  for (int c = 0; c < index; ++c)
    for (int g = 0; g < n; ++g) {
      if (tree[(size_t)c * n + g]) continue;
      R.gen_of[(size_t)c * n + g] = R.presentation.ngens();
      R.presentation.gens.push_back(P.gens[g] + "_" + std::to_string(c));
    }
  for (int c = 0; c < index; ++c)
    for (const Word& r : P.relators) {
      int end = 0;
      Word w = R.rewrite_from(c, r, &end);
      if (end != c) throw Error(ErrorKind::IncompleteTable, "relator does not close at coset " + std::to_string(c));
      if (!w.empty()) R.presentation.relators.push_back(w);
    }
  return R;
}

}  // namespace bianchi
