#include "bianchi/triangulation.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "bianchi/errors.hpp"
#include "json.hpp"

namespace bianchi {

Perm4 perm_inverse(const Perm4& p) {
  Perm4 r{};
  for (int i = 0; i < 4; ++i) r[p[i]] = (uint8_t)i;
  return r;
}

Perm4 perm_compose(const Perm4& p, const Perm4& q) {
  Perm4 r{};
  for (int i = 0; i < 4; ++i) r[i] = p[q[i]];
  return r;
}

bool perm_is_odd(const Perm4& p) {
  int inv = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[i] > p[j]) ++inv;
  return inv & 1;
}

namespace {
constexpr int kEdgeIndex[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
constexpr int kEdgeVerts[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

struct DSU {
  std::vector<int> p;
  explicit DSU(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

// Union-find carrying a Z/2 orientation offset to the parent.
struct ParityDSU {
  std::vector<int> p;
  std::vector<int8_t> par;
  bool conflict = false;
  explicit ParityDSU(size_t n) : p(n), par(n, 0) { std::iota(p.begin(), p.end(), 0); }
  std::pair<int, int8_t> find(int x) {
    int8_t acc = 0;
    int r = x;
    while (p[r] != r) {
      acc ^= par[r];
      r = p[r];
    }
    // compress
    int8_t a2 = acc;
    while (p[x] != x) {
      int nx = p[x];
      int8_t px = par[x];
      p[x] = r;
      par[x] = a2;
      a2 ^= px;
      x = nx;
    }
    return {r, acc};
  }
  void unite(int a, int b, int8_t rel) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) {
      if ((pa ^ pb) != rel) conflict = true;
      return;
    }
    if (ra < rb) {
      p[rb] = ra;
      par[rb] = pa ^ pb ^ rel;
    } else {
      p[ra] = rb;
      par[ra] = pa ^ pb ^ rel;
    }
  }
};

std::vector<int> relabel(std::vector<int>& roots) {
  std::unordered_map<int, int> id;
  std::vector<int> out(roots.size());
  for (size_t i = 0; i < roots.size(); ++i) {
    auto it = id.find(roots[i]);
    if (it == id.end()) it = id.emplace(roots[i], (int)id.size()).first;
    out[i] = it->second;
  }
  return out;
}

}  // namespace

int edge_index(int a, int b) { return kEdgeIndex[a][b]; }
std::array<int, 2> edge_vertices(int e) { return {kEdgeVerts[e][0], kEdgeVerts[e][1]}; }

Skeleton compute_skeleton(const Triangulation& T) {
  const size_t n = T.size();
  DSU vd(4 * n);
  ParityDSU ed(6 * n);
  Skeleton S;
  S.face_class.assign(4 * n, -1);
  for (size_t t = 0; t < n; ++t) {
    const Tetrahedron& tt = T.tets[t];
    for (int f = 0; f < 4; ++f) {
      int u = tt.nb[f];
      if (u < 0) continue;
      const Perm4& p = tt.perm[f];
      for (int v = 0; v < 4; ++v)
        if (v != f) vd.unite((int)(4 * t + v), 4 * u + p[v]);
      for (int e = 0; e < 6; ++e) {
        int a = kEdgeVerts[e][0], b = kEdgeVerts[e][1];
        if (a == f || b == f) continue;
        int e2 = kEdgeIndex[p[a]][p[b]];
        ed.unite((int)(6 * t + e), 6 * u + e2, p[a] > p[b] ? 1 : 0);
      }
    }
  }
  std::vector<int> vroots(4 * n), eroots(6 * n);
  for (size_t i = 0; i < 4 * n; ++i) vroots[i] = vd.find((int)i);
  S.edge_sign.resize(6 * n);
  for (size_t i = 0; i < 6 * n; ++i) {
    auto [r, par] = ed.find((int)i);
    eroots[i] = r;
    S.edge_sign[i] = par ? -1 : 1;
  }
  S.vertex_class = relabel(vroots);
  S.edge_class = relabel(eroots);
  S.vertices = S.vertex_class.empty() ? 0 : *std::max_element(S.vertex_class.begin(), S.vertex_class.end()) + 1;
  S.edges = S.edge_class.empty() ? 0 : *std::max_element(S.edge_class.begin(), S.edge_class.end()) + 1;
  int fc = 0;
  for (size_t t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      if (S.face_class[4 * t + f] >= 0) continue;
      S.face_class[4 * t + f] = fc;
      int u = T.tets[t].nb[f];
      if (u >= 0) S.face_class[4 * u + T.tets[t].perm[f][f]] = fc;
      ++fc;
    }
  S.faces = fc;

  S.vertex_ideal.assign(S.vertices, false);
  for (size_t t = 0; t < n; ++t)
    for (int v = 0; v < 4; ++v)
      if (T.tets[t].ideal[v]) S.vertex_ideal[S.vertex_class[4 * t + v]] = true;
  S.edge_degree.assign(S.edges, 0);
  for (int c : S.edge_class) ++S.edge_degree[c];

  std::vector<long> corners(S.vertices, 0), ends(S.vertices, 0);
  for (int c : S.vertex_class) ++corners[c];
  std::vector<char> seen(S.edges, 0);
  for (size_t t = 0; t < n; ++t)
    for (int e = 0; e < 6; ++e) {
      int c = S.edge_class[6 * t + e];
      if (seen[c]) continue;
      seen[c] = 1;
      ++ends[S.vertex_class[4 * t + kEdgeVerts[e][0]]];
      ++ends[S.vertex_class[4 * t + kEdgeVerts[e][1]]];
    }
  S.vertex_link_euler.resize(S.vertices);
  for (int v = 0; v < S.vertices; ++v) S.vertex_link_euler[v] = (int)(ends[v] - corners[v] / 2);
  return S;
}

VertexReport classify_vertices(const Triangulation& T) { return classify_vertices(T, compute_skeleton(T)); }

VertexReport classify_vertices(const Triangulation& T, const Skeleton& S) {
  VertexReport R;
  R.cusps.cusp_of_class.assign(S.vertices, -1);
  for (int v = 0; v < S.vertices; ++v) {
    if (S.vertex_ideal[v]) {
      R.cusps.cusp_of_class[v] = R.cusps.count++;
      if (S.vertex_link_euler[v] != 0) R.links_ok = false;
    } else {
      ++R.finite_vertices;
      if (S.vertex_link_euler[v] != 2) R.links_ok = false;
    }
  }
  R.cusps.members.resize(R.cusps.count);
  for (size_t i = 0; i < S.vertex_class.size(); ++i) {
    int c = R.cusps.cusp_of_class[S.vertex_class[i]];
    if (c >= 0) R.cusps.members[c].push_back((int)i);
  }
  R.link_euler = S.vertex_link_euler;
  R.euler = (long)S.vertices - S.edges + S.faces - (long)T.size();
  return R;
}

void check_gluing(const Triangulation& T) {
  for (size_t t = 0; t < T.size(); ++t)
    for (int f = 0; f < 4; ++f) {
      int u = T.tets[t].nb[f];
      if (u < 0 || u >= (int)T.size()) throw Error(ErrorKind::InconsistentGluing, "unglued face");
      const Perm4& p = T.tets[t].perm[f];
      int g = p[f];
      if (u == (int)t && g == f) throw Error(ErrorKind::InconsistentGluing, "face glued to itself");
      if (T.tets[u].nb[g] != (int)t || T.tets[u].perm[g] != perm_inverse(p))
        throw Error(ErrorKind::InconsistentGluing, "gluing is not an involution");
    }
}

namespace {

Triangulation build_copies(const FundamentalDomain& F, const QuadIdeal& I, size_t budget, bool gamma1) {
  if (I.d != F.d) throw Error(ErrorKind::UsageError, "ideal and domain use different d");
  const int S = (int)F.size();
  uint64_t expected = psl_order(I);
  if (gamma1) expected /= (uint64_t)I.norm();
  if (expected * (uint64_t)S > budget)
    throw Error(ErrorKind::BudgetExceeded, std::to_string(expected * S) + " tetrahedra exceed budget " +
                                               std::to_string(budget));
  PslQuotient Q(I);
  std::vector<ProjKey> gk(S);
  for (int j = 0; j < S; ++j) gk[j] = Q.key(F.simplices[j].matrix);

  Triangulation T;
  T.per_copy = S;
  T.gamma1 = gamma1;
  T.barycentric = true;
  std::vector<ProjKey> witness;
  std::unordered_map<uint64_t, int> index;
  index.reserve(expected * 2 + 1);
  auto label_of = [&](ProjKey k) -> uint64_t { return gamma1 ? Q.row_key(k) : k; };
  auto add_copy = [&](ProjKey w) {
    uint64_t lab = label_of(w);
    auto [it, fresh] = index.emplace(lab, (int)witness.size());
    if (fresh) {
      witness.push_back(w);
      T.copy_label.push_back(lab);
      if (witness.size() * (size_t)S > budget) throw Error(ErrorKind::BudgetExceeded, "tetrahedron budget exhausted");
    }
    return it->second;
  };
  add_copy(Q.identity());
  for (size_t c = 0; c < witness.size(); ++c) {
    for (int j = 0; j < S; ++j) add_copy(Q.mul(witness[c], gk[j]));
  }
  T.tets.resize(witness.size() * S);
  for (size_t c = 0; c < witness.size(); ++c) {
    for (int j = 0; j < S; ++j) {
      const DomainSimplex& s = F.simplices[j];
      Tetrahedron& t = T.tets[c * S + j];
      for (int f = 0; f < 3; ++f) t.nb[f] = (int32_t)(c * S + s.neighbors[f]);
      int c2 = index.at(label_of(Q.mul(witness[c], gk[j])));
      t.nb[3] = (int32_t)((size_t)c2 * S + s.mate);
      t.ideal[0] = s.ideal_vertex;
    }
  }
  if (witness.size() != expected)
    throw Error(ErrorKind::InconsistentGluing, "copy count " + std::to_string(witness.size()) + " differs from " +
                                                   std::to_string(expected));
  check_gluing(T);
  return T;
}

}  // namespace

Triangulation build_principal(const FundamentalDomain& F, const QuadIdeal& I, size_t budget) {
  return build_copies(F, I, budget, false);
}

Triangulation build_gamma1(const FundamentalDomain& F, const QuadIdeal& I, size_t budget) {
  return build_copies(F, I, budget, true);
}

Triangulation single_copy(const FundamentalDomain& F) {
  return build_principal(F, QuadIdeal::from_triple(F.d, 1, 0, 1), kDefaultTetBudget);
}

bool detect_orbifold(const Triangulation& T, const FundamentalDomain& F) {
  if (T.per_copy != (int)F.size() || T.per_copy == 0)
    throw Error(ErrorKind::UsageError, "triangulation was not built from this domain");
  Skeleton S = compute_skeleton(T);
  std::vector<char> done(S.edges, 0);
  for (size_t t = 0; t < T.size(); ++t)
    for (int e = 0; e < 6; ++e) {
      int c = S.edge_class[6 * t + e];
      if (done[c]) continue;
      done[c] = 1;
      int j = (int)(t % F.size());
      int a = kEdgeVerts[e][0], b = kEdgeVerts[e][1];
      int deg_q = walk_domain_edge(F, j, a, b).degree;
      int k = simplex_edge_order(F.simplices[j], a, b);
      if (S.edge_degree[c] != deg_q * k) return true;
    }
  return false;
}

std::string triangulation_to_json(const Triangulation& T) {
  using nlohmann::ordered_json;
  ordered_json out;
  out["format_version"] = 1;
  out["gamma1"] = T.gamma1;
  out["per_copy"] = T.per_copy;
  out["copy_labels"] = T.copy_label;
  ordered_json tets = ordered_json::array();
  for (const Tetrahedron& t : T.tets) {
    ordered_json o;
    o["neighbors"] = t.nb;
    ordered_json perms = ordered_json::array();
    for (const Perm4& p : t.perm) {
      std::string s;
      for (uint8_t x : p) s += char('0' + x);
      perms.push_back(s);
    }
    o["perms"] = perms;
    o["ideal"] = t.ideal;
    tets.push_back(std::move(o));
  }
  out["tetrahedra"] = std::move(tets);
  Skeleton S = compute_skeleton(T);
  out["vertex_classes"] = S.vertex_class;
  return out.dump(1) + "\n";
}

Triangulation triangulation_from_json(const std::string& text) {
  using nlohmann::json;
  Triangulation T;
  try {
    json in = json::parse(text);
    T.gamma1 = in.value("gamma1", false);
    T.per_copy = in.value("per_copy", 0);
    if (in.contains("copy_labels")) T.copy_label = in["copy_labels"].get<std::vector<uint64_t>>();
    for (const json& o : in.at("tetrahedra")) {
      Tetrahedron t;
      t.nb = o.at("neighbors").get<std::array<int32_t, 4>>();
      auto perms = o.at("perms").get<std::vector<std::string>>();
      for (int f = 0; f < 4; ++f)
        for (int i = 0; i < 4; ++i) t.perm[f][i] = (uint8_t)(perms.at(f).at(i) - '0');
      t.ideal = o.at("ideal").get<std::array<bool, 4>>();
      T.tets.push_back(t);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("triangulation file: ") + e.what());
  }
  check_gluing(T);
  return T;
}

}  // namespace bianchi
