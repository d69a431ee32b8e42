#include <deque>

#include "bianchi/errors.hpp"
#include "bianchi/homology.hpp"

namespace bianchi {

std::vector<int> orient(const Triangulation& T) {
  const size_t n = T.size();
  std::vector<int> o(n, 0);
  for (size_t s = 0; s < n; ++s) {
    if (o[s]) continue;
    o[s] = 1;
    std::deque<int> q{(int)s};
    while (!q.empty()) {
      int t = q.front();
      q.pop_front();
      for (int f = 0; f < 4; ++f) {
        int u = T.tets[t].nb[f];
        if (u < 0) continue;
        // odd gluing permutations keep the orientation
        int want = perm_is_odd(T.tets[t].perm[f]) ? o[t] : -o[t];
        if (o[u] == 0) {
          o[u] = want;
          q.push_back(u);
        } else if (o[u] != want) {
          throw Error(ErrorKind::NotOrientable, "orientation conflict at tetrahedron " + std::to_string(u));
        }
      }
    }
  }
  return o;
}

ChainComplex boundary_matrices(const Triangulation& T) {
  orient(T);
  Skeleton S = compute_skeleton(T);
  const size_t n = T.size();
  ChainComplex C;
  C.vertices = S.vertices;
  C.edges = S.edges;
  C.faces = S.faces;
  C.d1 = SparseIntMatrix(S.vertices, S.edges);
  C.d2 = SparseIntMatrix(S.edges, S.faces);
  std::vector<char> edge_done(S.edges, 0), face_done(S.faces, 0);
  for (size_t t = 0; t < n; ++t) {
    for (int e = 0; e < 6; ++e) {
      size_t slot = 6 * t + e;
      int c = S.edge_class[slot];
      if (edge_done[c] || S.edge_sign[slot] != 1) continue;
      edge_done[c] = 1;
      auto [a, b] = edge_vertices(e);
      int va = S.vertex_class[4 * t + a], vb = S.vertex_class[4 * t + b];
      if (va != vb) {
        C.d1.add(vb, c, 1);
        C.d1.add(va, c, -1);
      }
    }
    for (int f = 0; f < 4; ++f) {
      int fc = S.face_class[4 * t + f];
      if (face_done[fc]) continue;
      face_done[fc] = 1;
      int v[3], k = 0;
      for (int x = 0; x < 4; ++x)
        if (x != f) v[k++] = x;
      const int pairs[3][2] = {{v[1], v[2]}, {v[0], v[2]}, {v[0], v[1]}};
      const int sgn[3] = {1, -1, 1};
      for (int i = 0; i < 3; ++i) {
        size_t slot = 6 * t + edge_index(pairs[i][0], pairs[i][1]);
        C.d2.add(S.edge_class[slot], fc, sgn[i] * S.edge_sign[slot]);
      }
    }
  }
  C.d1.normalize();
  C.d2.normalize();
  return C;
}

HomologyResult h1_with_quotient(const Triangulation& T) {
  ChainComplex C = boundary_matrices(T);
  SnfResult s1 = smith_normal_form(C.d1);
  SnfResult s2 = smith_normal_form(C.d2);
  HomologyResult R;
  R.quotient.rank = C.edges - s1.rank - s2.rank;
  R.quotient.divisors = s2.divisors;
  R.cusps = classify_vertices(T).cusps.count;
  AbelianGroup cusps;
  cusps.rank = R.cusps;
  R.h1 = direct_sum(R.quotient, cusps);
  return R;
}

Verdict cover_obstruction(ObstructionKind kind, const ObstructionData& data) {
  (void)kind;  // all three obstructions compare |quotient| against a cover degree
  if (!data.quotient_order) return Verdict::Excluded;
  return *data.quotient_order > data.degree ? Verdict::Excluded : Verdict::Inconclusive;
}

std::string verdict_name(Verdict v) { return v == Verdict::Excluded ? "excluded" : "inconclusive"; }

mpz_class principal_cover_degree(const QuadIdeal& J, const QuadIdeal& I) {
  if (!ideal_subset(J, I)) throw Error(ErrorKind::UsageError, "J must be contained in I");
  mpz_class a = (unsigned long)psl_order(J), b = (unsigned long)psl_order(I);
  if (!mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t())) throw Error(ErrorKind::UsageError, "orders do not divide");
  return a / b;
}

}  // namespace bianchi
