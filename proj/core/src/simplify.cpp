#include "bianchi/simplify.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "bianchi/errors.hpp"

namespace bianchi {

namespace {

// Role of a simplex inside its group of four and the induced vertex map.
// Old vertices 0 and 3 survive; 1 and 2 (edge and face centres) disappear.
constexpr int kRoleMap[4][4] = {
    {0, -1, -1, 2},  // A
    {1, -1, -1, 2},  // B = n0(A)
    {0, -1, -1, 3},  // C = n3(A)
    {1, -1, -1, 3},  // D = n0(C)
};

// Per new face (opposite x): two witnesses (role, old face).
constexpr int kWitness[4][2][2] = {
    {{1, 1}, {3, 1}},  // opposite new 0
    {{0, 1}, {2, 1}},  // opposite new 1
    {{2, 2}, {3, 2}},  // opposite new 2
    {{0, 2}, {1, 2}},  // opposite new 3
};

}  // namespace

Triangulation coarsen_barycentric(const Triangulation& T) {
  const size_t n = T.size();
  if (!T.barycentric) throw Error(ErrorKind::NotBarycentric, "input is not a barycentric subdivision");
  for (const Tetrahedron& t : T.tets)
    for (const Perm4& p : t.perm)
      if (p != kIdentityPerm) throw Error(ErrorKind::NotBarycentric, "non-identity gluing permutation");
  std::vector<int> group(n, -1), role(n, -1);
  std::vector<std::array<int, 4>> members;
  for (size_t a = 0; a < n; ++a) {
    if (group[a] >= 0) continue;
    int A = (int)a;
    int B = T.tets[A].nb[0];
    int C = T.tets[A].nb[3];
    int D = T.tets[C].nb[0];
    if (T.tets[B].nb[3] != D) throw Error(ErrorKind::NotBarycentric, "simplices do not close up around an edge");
    std::array<int, 4> g{A, B, C, D};
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (g[i] == g[j]) throw Error(ErrorKind::NotBarycentric, "degenerate group of four");
    for (int i = 0; i < 4; ++i) {
      if (group[g[i]] >= 0) throw Error(ErrorKind::NotBarycentric, "overlapping groups");
      group[g[i]] = (int)members.size();
      role[g[i]] = i;
    }
    members.push_back(g);
  }
  Triangulation R;
  R.tets.resize(members.size());
  for (size_t G = 0; G < members.size(); ++G) {
    Tetrahedron& nt = R.tets[G];
    const auto& g = members[G];
    nt.ideal[0] = T.tets[g[0]].ideal[0];
    nt.ideal[1] = T.tets[g[1]].ideal[0];
    nt.ideal[2] = T.tets[g[0]].ideal[3];
    nt.ideal[3] = T.tets[g[2]].ideal[3];
    for (int x = 0; x < 4; ++x) {
      Perm4 p{255, 255, 255, 255};
      int target = -1;
      for (int w = 0; w < 2; ++w) {
        int r = kWitness[x][w][0], f = kWitness[x][w][1];
        int W = g[r];
        int W2 = T.tets[W].nb[f];
        int G2 = group[W2], r2 = role[W2];
        if (target >= 0 && target != G2) throw Error(ErrorKind::NotBarycentric, "face witnesses disagree");
        target = G2;
        for (int i : {0, 3}) {
          int y = kRoleMap[r][i];
          int y2 = kRoleMap[r2][i];  // identity permutations
          if (y2 < 0) throw Error(ErrorKind::NotBarycentric, "corner maps to a centre");
          if (p[y] != 255 && p[y] != y2) throw Error(ErrorKind::NotBarycentric, "inconsistent face map");
          p[y] = (uint8_t)y2;
        }
      }
      int missing = 0 + 1 + 2 + 3;
      int used = 0;
      for (int y = 0; y < 4; ++y)
        if (y != x) {
          if (p[y] == 255) throw Error(ErrorKind::NotBarycentric, "face map incomplete");
          used += p[y];
        }
      p[x] = (uint8_t)(missing - used);
      nt.nb[x] = target;
      nt.perm[x] = p;
    }
  }
  try {
    check_gluing(R);
  } catch (const Error& e) {
    throw Error(ErrorKind::NotBarycentric, std::string("coarsened gluing invalid: ") + e.what());
  }
  return R;
}

namespace {

struct DSU {
  std::vector<int> p;
  explicit DSU(size_t n = 0) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
};

struct LocalDSU {
  std::unordered_map<int, int> p;
  int find(int x) {
    auto it = p.find(x);
    if (it == p.end()) return x;
    int r = find(it->second);
    it->second = r;
    return r;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

constexpr int kEdgeVerts[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

class Collapser {
 public:
  explicit Collapser(const Triangulation& T) : tets_(T.tets), alive_(T.size(), 1) {
    Skeleton S = compute_skeleton(T);
    eslot_ = S.edge_class;
    vslot_ = S.vertex_class;
    edsu_ = DSU(S.edges);
    vdsu_ = DSU(S.vertices);
    edeg_.assign(S.edges, 0);
    emb_.resize(S.edges);
    for (size_t i = 0; i < eslot_.size(); ++i) {
      ++edeg_[eslot_[i]];
      emb_[eslot_[i]].push_back((int)i);
    }
    videal_ = S.vertex_ideal;
    for (bool b : videal_) finite_ += !b;
  }

  int finite() const { return finite_; }

  bool has_finite_end(int E) {
    int a, b;
    if (!endpoints(E, a, b)) return false;
    return !videal_[a] || !videal_[b];
  }

  int degree(int E) const { return edeg_[E]; }
  int root(int E) { return edsu_.find(E); }
  size_t edge_ids() const { return edeg_.size(); }

  bool try_collapse(int E) {
    E = edsu_.find(E);
    std::vector<int> embs = embeddings(E);
    if (embs.empty()) return false;
    // no tetrahedron contains the edge twice
    std::vector<int> ts;
    for (int s : embs) ts.push_back(s / 6);
    std::sort(ts.begin(), ts.end());
    if (std::adjacent_find(ts.begin(), ts.end()) != ts.end()) return false;
    int va, vb;
    endpoints(E, va, vb);
    if (va == vb) return false;
    if (videal_[va] && videal_[vb]) return false;

    LocalDSU edges, tris;
    std::vector<int> seen_tri;
    for (int s : embs) {
      int t = s / 6, e = s % 6;
      int a = kEdgeVerts[e][0], b = kEdgeVerts[e][1];
      int xy[2], k = 0;
      for (int v = 0; v < 4; ++v)
        if (v != a && v != b) xy[k++] = v;
      for (int i = 0; i < 2; ++i) {
        int opp = xy[i], other = xy[1 - i];
        int key = face_key(t, opp);
        if (std::find(seen_tri.begin(), seen_tri.end(), key) != seen_tri.end()) continue;
        seen_tri.push_back(key);
        int e1 = ecls(t, a, other), e2 = ecls(t, b, other);
        if (e1 == E || e2 == E) return false;
        if (!edges.unite(e1, e2)) return false;
      }
      int fa = face_key(t, a), fb = face_key(t, b);
      if (fa == fb) return false;
      if (!tris.unite(fa, fb)) return false;
    }

    for (int s : embs) {
      int t = s / 6, e = s % 6;
      int a = kEdgeVerts[e][0], b = kEdgeVerts[e][1];
      // orient so that a lies in class va
      if (vdsu_.find(vslot_[4 * t + a]) != va) std::swap(a, b);
      for (int k = 0; k < 6; ++k) --edeg_[ecls_slot(6 * t + k)];
      for (int x = 0; x < 4; ++x) {
        if (x == a || x == b) continue;
        merge_edges(ecls(t, a, x), ecls(t, b, x));
      }
      merge_vertices(vdsu_.find(vslot_[4 * t + a]), vdsu_.find(vslot_[4 * t + b]));
      int s1 = tets_[t].nb[a], s2 = tets_[t].nb[b];
      Perm4 p1 = tets_[t].perm[a], p2 = tets_[t].perm[b];
      Perm4 sw = kIdentityPerm;
      std::swap(sw[a], sw[b]);
      Perm4 q = perm_compose(p2, perm_compose(sw, perm_inverse(p1)));
      int f1 = p1[a], f2 = p2[b];
      alive_[t] = 0;
      tets_[s1].nb[f1] = s2;
      tets_[s1].perm[f1] = q;
      tets_[s2].nb[f2] = s1;
      tets_[s2].perm[f2] = perm_inverse(q);
    }
    return true;
  }

  int live_edge_classes() {
    int c = 0;
    for (size_t i = 0; i < edeg_.size(); ++i)
      if (edsu_.find((int)i) == (int)i && edeg_[i] > 0) ++c;
    return c;
  }

  Triangulation result() const {
    std::vector<int> remap(tets_.size(), -1);
    Triangulation R;
    for (size_t t = 0; t < tets_.size(); ++t)
      if (alive_[t]) {
        remap[t] = (int)R.tets.size();
        R.tets.push_back(tets_[t]);
      }
    for (auto& t : R.tets)
      for (auto& nb : t.nb) nb = remap[nb];
    for (size_t t = 0, k = 0; t < tets_.size(); ++t) {
      if (!alive_[t]) continue;
      for (int v = 0; v < 4; ++v) R.tets[k].ideal[v] = videal_[const_cast<Collapser*>(this)->vdsu_.find(vslot_[4 * t + v])];
      ++k;
    }
    return R;
  }

 private:
  std::vector<Tetrahedron> tets_;
  std::vector<char> alive_;
  std::vector<int> eslot_, vslot_;
  DSU edsu_, vdsu_;
  std::vector<int> edeg_;
  std::vector<std::vector<int>> emb_;
  std::vector<bool> videal_;
  int finite_ = 0;

  int ecls_slot(int slot) { return edsu_.find(eslot_[slot]); }
  int ecls(int t, int a, int b) { return ecls_slot(6 * t + edge_index(a, b)); }
  int face_key(int t, int f) const {
    int u = tets_[t].nb[f];
    int g = tets_[t].perm[f][f];
    return std::min(4 * t + f, 4 * u + g);
  }

  std::vector<int> embeddings(int E) {
    std::vector<int>& L = emb_[E];
    std::vector<int> live;
    for (int s : L)
      if (alive_[s / 6]) live.push_back(s);
    L = live;
    return live;
  }

  bool endpoints(int E, int& a, int& b) {
    for (int s : emb_[E]) {
      if (!alive_[s / 6]) continue;
      int t = s / 6, e = s % 6;
      a = vdsu_.find(vslot_[4 * t + kEdgeVerts[e][0]]);
      b = vdsu_.find(vslot_[4 * t + kEdgeVerts[e][1]]);
      return true;
    }
    return false;
  }

  void merge_edges(int x, int y) {
    x = edsu_.find(x);
    y = edsu_.find(y);
    if (x == y) return;
    if (emb_[x].size() < emb_[y].size()) std::swap(x, y);
    edsu_.p[y] = x;
    edeg_[x] += edeg_[y];
    edeg_[y] = 0;
    emb_[x].insert(emb_[x].end(), emb_[y].begin(), emb_[y].end());
    emb_[y].clear();
    emb_[y].shrink_to_fit();
    pending_.push_back(x);
  }

  void merge_vertices(int x, int y) {
    if (x == y) return;
    bool ideal = videal_[x] || videal_[y];
    if (!videal_[x] && !videal_[y]) --finite_;
    else if (!videal_[x] || !videal_[y]) --finite_;
    vdsu_.p[y] = x;
    videal_[x] = ideal;
  }

 public:
  std::vector<int> pending_;
};

}  // namespace

namespace {

uint64_t splitmix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Triangulation collapse_edges(const Triangulation& T, CollapseStats* stats, CollapseOrder order, uint64_t seed) {
  Collapser C(T);
  CollapseStats st;
  st.tets_before = T.size();
  st.finite_before = C.finite();
  struct Item {
    int64_t key;
    int id;
    uint32_t version;
    bool operator<(const Item& o) const { return key != o.key ? key < o.key : id > o.id; }
  };
  std::priority_queue<Item> pq;
  std::vector<uint32_t> version(C.edge_ids(), 0);
  auto push = [&](int r) {
    if (C.degree(r) <= 0) return;
    int64_t key = order == CollapseOrder::MaxDegree ? C.degree(r) : (int64_t)(splitmix(seed * 0x100000001b3ULL + (uint64_t)r) >> 2);
    pq.push({key, r, ++version[r]});
  };
  std::vector<int> deferred;
  for (size_t i = 0; i < C.edge_ids(); ++i)
    if (C.root((int)i) == (int)i) push((int)i);
  for (;;) {
    ++st.passes;
    size_t before = st.collapses;
    while (!pq.empty()) {
      Item it = pq.top();
      pq.pop();
      int id = it.id;
      if (C.root(id) != id || version[id] != it.version || C.degree(id) == 0) continue;
      if (!C.has_finite_end(id)) continue;
      if (C.try_collapse(id)) {
        ++st.collapses;
        for (int x : C.pending_) push(C.root(x));
        C.pending_.clear();
      } else {
        ++st.rejected_checks;
        deferred.push_back(id);
      }
    }
    if (st.collapses == before || deferred.empty() || C.finite() == 0) break;
    for (int id : deferred)
      if (C.root(id) == id) push(id);
    deferred.clear();
  }
  Triangulation R = C.result();
  check_gluing(R);
  Skeleton S = compute_skeleton(R);
  int finite = 0;
  for (bool b : S.vertex_ideal) finite += !b;
  if (finite != C.finite() || S.edges != C.live_edge_classes())
    throw Error(ErrorKind::InconsistentGluing, "incremental skeleton disagrees with recomputation");
  st.tets_after = R.size();
  st.finite_after = finite;
  if (stats) *stats = st;
  return R;
}

Triangulation simplify(const Triangulation& T, SimplifyStats* stats) {
  SimplifyStats st;
  st.built = T.size();
  Triangulation C = T.barycentric ? coarsen_barycentric(T) : T;
  st.coarsened = C.size();
  CollapseStats cs;
  Triangulation best = collapse_edges(C, &cs);
  int best_finite = cs.finite_after;
  st.attempts = 1;
  for (uint64_t seed = 1; best_finite > 0 && seed <= (uint64_t)kCollapseRetries; ++seed) {
    Triangulation R = collapse_edges(C, &cs, CollapseOrder::Shuffled, seed);
    ++st.attempts;
    if (cs.finite_after < best_finite || (cs.finite_after == best_finite && R.size() < best.size())) {
      best = std::move(R);
      best_finite = cs.finite_after;
      st.seed = seed;
    }
  }
  st.collapsed = best.size();
  st.finite_vertices = best_finite;
  if (stats) *stats = st;
  return best;
}

}  // namespace bianchi
