#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "bianchi/domain.hpp"
#include "bianchi/errors.hpp"

namespace bianchi {

namespace {

std::vector<QuadInt> elements_up_to_norm(int64_t d, int64_t bound) {
  std::vector<QuadInt> out;
  int64_t disc = std::llabs(field_discriminant(d));
  int64_t bmax = (int64_t)std::floor(std::sqrt(4.0 * (double)bound / (double)disc)) + 1;
  int64_t amax = (int64_t)std::floor(std::sqrt((double)bound)) + bmax + 1;
  for (int64_t b = -bmax; b <= bmax; ++b)
    for (int64_t a = -amax; a <= amax; ++a) {
      QuadInt x(d, a, b);
      if (x.norm() <= bound) out.push_back(x);
    }
  return out;
}

bool exact_divide(const QuadInt& x, const QuadInt& c, QuadInt& q) {
  int64_t n = c.norm();
  QuadInt p = x * c.conj();
  if (p.a % n != 0 || p.b % n != 0) return false;
  q = QuadInt(x.d, p.a / n, p.b / n);
  return true;
}

struct MatLess {
  bool operator()(const ProjMatrix& x, const ProjMatrix& y) const {
    auto key = [](const ProjMatrix& m) {
      return std::array<int64_t, 8>{m.a.a, m.a.b, m.b.a, m.b.b, m.c.a, m.c.b, m.e.a, m.e.b};
    };
    return key(x) < key(y);
  }
};

struct Candidate {
  int index;
  Vec4 p;  // image of the base point in the conjugated frame
};

// Union-find with path halving.
struct DSU {
  std::vector<int> p;
  explicit DSU(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

const std::vector<int64_t>& supported_discriminants() {
  static const std::vector<int64_t> ds{1, 2, 3, 5, 6, 7, 11, 15, 19, 23, 31, 39, 47, 71};
  return ds;
}

bool is_supported_d(int64_t d) {
  const auto& ds = supported_discriminants();
  return std::find(ds.begin(), ds.end(), d) != ds.end();
}

ProjMatrix proj_normalize(const ProjMatrix& m) {
  for (int64_t v : {m.a.a, m.a.b, m.b.a, m.b.b, m.c.a, m.c.b, m.e.a, m.e.b}) {
    if (v > 0) return m;
    if (v < 0) return m.neg();
  }
  return m;
}

std::vector<ProjMatrix> sample_elements(int64_t d, int64_t radius) {
  const int64_t bound = radius * radius;
  std::vector<QuadInt> elems = elements_up_to_norm(d, bound);
  std::vector<QuadInt> units;
  for (const QuadInt& x : elems)
    if (x.norm() == 1) units.push_back(x);
  std::vector<ProjMatrix> out;
  const QuadInt one(d, 1), zero(d, 0);
  for (const QuadInt& c : elems) {
    if (c.is_zero()) {
      for (const QuadInt& e : units) {
        QuadInt a = e.conj();
        for (const QuadInt& b : elems) {
          ProjMatrix m(a, b, zero, e);
          if (proj_normalize(m) == m) out.push_back(m);
        }
      }
      continue;
    }
    for (const QuadInt& e : elems) {
      for (const QuadInt& a : elems) {
        QuadInt b;
        if (!exact_divide(a * e - one, c, b) || b.norm() > bound) continue;
        ProjMatrix m(a, b, c, e);
        if (proj_normalize(m) == m) out.push_back(m);
      }
    }
  }
  std::sort(out.begin(), out.end(), MatLess());
  return out;
}

int projective_order(const ProjMatrix& m, int max_k) {
  ProjMatrix p = m;
  for (int k = 1; k <= max_k; ++k) {
    if (p.is_pm_identity()) return k;
    p = p * m;
  }
  return 0;
}

namespace {

std::vector<QuadRat> conjugator_offsets() {
  std::vector<QuadRat> out;
  const int num[][4] = {{1, 7, 1, 11}, {1, 5, 1, 13}, {2, 7, 1, 17}, {1, 9, 2, 19}, {3, 11, 1, 23},
                        {1, 13, 3, 29}, {2, 13, 1, 31}, {3, 17, 2, 37}};
  for (auto& q : num) out.push_back(QuadRat(mpq_class(q[0], q[1]), mpq_class(q[2], q[3])));
  return out;
}

}  // namespace

DirichletDomain dirichlet_domain(int64_t d, int64_t sample_radius) {
  if (!is_square_free(d)) throw Error(ErrorKind::NotSquareFree, "d=" + std::to_string(d));
  if (!is_supported_d(d)) throw Error(ErrorKind::UnsupportedD, "d=" + std::to_string(d));
  std::vector<ProjMatrix> sample = sample_elements(d, sample_radius);
  sample.erase(std::remove_if(sample.begin(), sample.end(), [](const ProjMatrix& m) { return m.is_pm_identity(); }),
               sample.end());

  DirichletDomain D;
  D.d = d;
  D.sample_radius = sample_radius;
  D.sample_size = sample.size();

  std::vector<Candidate> cands;
  LorentzMatrix Linv;
  Vec4 q0;
  bool ok = false;
  const Vec4 e0{1, 0, 0, 0};
  for (const QuadRat& z0 : conjugator_offsets()) {
    RatMatrix l = make_conjugator(d, mpq_class(9, 8), z0);
    Linv = psl_to_lorentz(l).inverse();
    q0 = hermitian_action(l, e0);
    cands.clear();
    ok = true;
    for (size_t i = 0; i < sample.size(); ++i) {
      Vec4 p = Linv.apply(hermitian_action(RatMatrix::from(sample[i]), q0));
      if (sgn(p[1]) == 0 && sgn(p[2]) == 0 && sgn(p[3]) == 0) {
        ok = false;
        break;
      }
      cands.push_back({(int)i, std::move(p)});
    }
    if (ok) {
      D.conjugator = l;
      break;
    }
  }
  if (!ok) throw Error(ErrorKind::DegenerateBisector, "no conjugator avoids all sampled fixed points");
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) { return x.p[0] < y.p[0]; });

  ConvexPolyhedron P = ConvexPolyhedron::box(mpq_class(2));
  for (const Candidate& c : cands) P.cut(bisector_from_image(d, c.p), c.index);

  for (const PolyFace& f : P.faces())
    if (f.label < 0) throw Error(ErrorKind::NotFiniteVolume, "bounding box face survives");
  D.ideal.resize(P.vertices().size());
  for (size_t i = 0; i < P.vertices().size(); ++i) {
    const Vec3& v = P.vertices()[i];
    mpq_class q = v[0] * v[0] + v[1] * v[1] + d * v[2] * v[2];
    if (q > 1) throw Error(ErrorKind::IncompleteSample, "vertex outside the sphere at infinity");
    D.ideal[i] = (q == 1);
  }

  // Face pairings.
  std::map<ProjMatrix, int, MatLess> face_of;
  for (size_t f = 0; f < P.faces().size(); ++f) face_of[sample[P.faces()[f].label]] = (int)f;
  const LorentzMatrix Lc = psl_to_lorentz(D.conjugator);
  std::map<Vec3, int> vertex_id;
  for (size_t i = 0; i < P.vertices().size(); ++i) vertex_id[P.vertices()[i]] = (int)i;
  const size_t nf = P.faces().size();
  D.face_matrix.resize(nf);
  D.mate.assign(nf, -1);
  D.vertex_image.resize(nf);
  for (size_t f = 0; f < nf; ++f) {
    const PolyFace& F = P.faces()[f];
    const ProjMatrix& m = sample[F.label];
    ProjMatrix inv = proj_normalize(m.inverse());
    auto it = face_of.find(inv);
    if (it == face_of.end()) throw Error(ErrorKind::IncompleteSample, "face " + m.str() + " has no mate");
    int g = it->second;
    D.face_matrix[f] = m;
    D.mate[f] = g;
    RatMatrix minv = RatMatrix::from(m.inverse());
    const auto& mate_cycle = P.faces()[g].cycle;
    for (int v : F.cycle) {
      const Vec3& x = P.vertices()[v];
      Vec4 h{1, x[0], x[1], x[2]};
      Vec4 y = Linv.apply(hermitian_action(minv, Lc.apply(h)));
      Vec3 k = klein_of(y);
      auto vt = vertex_id.find(k);
      if (vt == vertex_id.end() || std::find(mate_cycle.begin(), mate_cycle.end(), vt->second) == mate_cycle.end())
        throw Error(ErrorKind::IncompleteSample, "vertex of face " + m.str() + " has no match");
      D.vertex_image[f].push_back(vt->second);
    }
  }
  D.poly = std::move(P);
  D.edges = D.poly.edges();
  D.edge_order = edge_singular_orders(D);

  DSU dsu(D.poly.vertices().size());
  for (size_t f = 0; f < nf; ++f)
    for (size_t i = 0; i < D.poly.faces()[f].cycle.size(); ++i)
      dsu.unite(D.poly.faces()[f].cycle[i], D.vertex_image[f][i]);
  std::vector<int> roots;
  for (size_t i = 0; i < D.ideal.size(); ++i)
    if (D.ideal[i]) roots.push_back(dsu.find((int)i));
  std::sort(roots.begin(), roots.end());
  D.ideal_vertex_classes = (int)(std::unique(roots.begin(), roots.end()) - roots.begin());
  D.volume = domain_volume(D);
  return D;
}

std::vector<int> edge_singular_orders(const DirichletDomain& D) {
  const auto& faces = D.poly.faces();
  std::map<std::pair<int, int>, int> edge_of;
  for (size_t i = 0; i < D.edges.size(); ++i) edge_of[std::minmax(D.edges[i].u, D.edges[i].w)] = (int)i;
  auto image = [&](int f, int v) {
    const auto& cyc = faces[f].cycle;
    size_t i = std::find(cyc.begin(), cyc.end(), v) - cyc.begin();
    return D.vertex_image[f][i];
  };
  std::vector<int> order(D.edges.size(), 0);
  const size_t guard = 4 * D.edges.size() + 8;
  for (size_t e0 = 0; e0 < D.edges.size(); ++e0) {
    if (order[e0]) continue;
    std::vector<int> members{(int)e0};
    ProjMatrix h = ProjMatrix::identity(D.d);
    int e = (int)e0, f = D.edges[e0].f1;
    for (size_t step = 0;; ++step) {
      if (step > guard) throw Error(ErrorKind::BadEdgeCycle, "edge cycle does not close");
      const PolyEdge& E = D.edges[e];
      int u = image(f, E.u), w = image(f, E.w);
      h = D.face_matrix[f].inverse() * h;
      int fp = D.mate[f];
      auto it = edge_of.find(std::minmax(u, w));
      if (it == edge_of.end()) throw Error(ErrorKind::BadEdgeCycle, "edge image is not an edge");
      e = it->second;
      const PolyEdge& E2 = D.edges[e];
      f = (E2.f1 == fp) ? E2.f2 : E2.f1;
      if (E2.f1 != fp && E2.f2 != fp) throw Error(ErrorKind::BadEdgeCycle, "edge image not on mate face");
      if (e == (int)e0 && f == D.edges[e0].f1) break;
      members.push_back(e);
    }
    int k = projective_order(h, 3);
    if (k == 0) throw Error(ErrorKind::BadEdgeCycle, "cycle transformation " + h.str() + " has order > 3");
    for (int m : members) order[m] = k;
  }
  return order;
}

DirichletDomain verified_dirichlet_domain(int64_t d, int64_t start_radius, int64_t max_radius) {
  int64_t r = start_radius > 0 ? start_radius : 3;
  const double target = bianchi_covolume(d);
  std::string last;
  for (; r <= max_radius; ++r) {
    try {
      DirichletDomain D = dirichlet_domain(d, r);
      if (std::abs(D.volume - target) < 1e-6) return D;
      last = "volume " + std::to_string(D.volume) + " vs " + std::to_string(target);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IncompleteSample && e.kind() != ErrorKind::NotFiniteVolume &&
          e.kind() != ErrorKind::BadEdgeCycle)
        throw;
      last = e.what();
    }
  }
  throw Error(ErrorKind::IncompleteSample,
              "no verified domain for d=" + std::to_string(d) + " up to radius " + std::to_string(max_radius) + ": " + last);
}

}  // namespace bianchi
