#include "bianchi/polyhedron.hpp"

#include <algorithm>
#include <map>

#include "bianchi/errors.hpp"

namespace bianchi {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
mpq_class dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

ConvexPolyhedron ConvexPolyhedron::box(const mpq_class& h) {
  ConvexPolyhedron P;
  for (int i = 0; i < 8; ++i)
    P.add_vertex({(i & 1) ? h : mpq_class(-h), (i & 2) ? h : mpq_class(-h), (i & 4) ? h : mpq_class(-h)});
  auto face = [&](int label, int axis, int sign, std::vector<int> cyc) {
    PolyFace f;
    f.label = label;
    f.plane.c1 = axis == 0 ? sign : 0;
    f.plane.c2 = axis == 1 ? sign : 0;
    f.plane.c3 = axis == 2 ? sign : 0;
    f.plane.c0 = h;
    f.cycle = std::move(cyc);
    P.faces_.push_back(std::move(f));
  };
  face(-1, 0, -1, {0, 4, 6, 2});
  face(-2, 0, 1, {1, 3, 7, 5});
  face(-3, 1, -1, {0, 1, 5, 4});
  face(-4, 1, 1, {2, 6, 7, 3});
  face(-5, 2, -1, {0, 2, 3, 1});
  face(-6, 2, 1, {4, 5, 7, 6});
  return P;
}

int ConvexPolyhedron::add_vertex(const Vec3& v) {
  verts_.push_back(v);
  approx_.push_back({v[0].get_d(), v[1].get_d(), v[2].get_d()});
  return (int)verts_.size() - 1;
}

bool ConvexPolyhedron::cut(const HalfSpace& h, int label) {
  const double a1 = h.c1.get_d(), a2 = h.c2.get_d(), a3 = h.c3.get_d(), a0 = h.c0.get_d();
  const double scale = 1e-9 * (std::abs(a1) + std::abs(a2) + std::abs(a3) + std::abs(a0) + 1);
  bool maybe = false;
  for (const auto& v : approx_)
    if (a1 * v[0] + a2 * v[1] + a3 * v[2] - a0 > -scale) {
      maybe = true;
      break;
    }
  if (!maybe) return false;

  const size_t nv = verts_.size();
  std::vector<int> sgn_(nv);
  std::vector<mpq_class> val(nv);
  bool any_out = false;
  for (size_t i = 0; i < nv; ++i) {
    val[i] = h.eval(verts_[i]);
    sgn_[i] = sgn(val[i]);
    if (sgn_[i] > 0) any_out = true;
  }
  if (!any_out) return false;

  std::map<std::pair<int, int>, int> cross_vertex;
  auto crossing = [&](int u, int w) {
    auto key = std::minmax(u, w);
    auto it = cross_vertex.find(key);
    if (it != cross_vertex.end()) return it->second;
    mpq_class t = val[u] / (val[u] - val[w]);
    Vec3 p;
    for (int k = 0; k < 3; ++k) p[k] = verts_[u][k] + t * (verts_[w][k] - verts_[u][k]);
    int id = add_vertex(p);
    sgn_.push_back(0);
    val.push_back(0);
    cross_vertex.emplace(key, id);
    return id;
  };

  std::vector<PolyFace> kept;
  for (PolyFace& f : faces_) {
    std::vector<int> out;
    const size_t m = f.cycle.size();
    for (size_t i = 0; i < m; ++i) {
      int u = f.cycle[i], w = f.cycle[(i + 1) % m];
      if (sgn_[u] <= 0) out.push_back(u);
      if ((sgn_[u] < 0 && sgn_[w] > 0) || (sgn_[u] > 0 && sgn_[w] < 0)) out.push_back(crossing(u, w));
    }
    if (out.size() >= 3) {
      f.cycle = std::move(out);
      kept.push_back(std::move(f));
    }
  }

  // New face: all surviving vertices on the plane, sorted counter-clockwise about the normal.
  std::vector<int> on;
  std::vector<char> used(verts_.size(), 0);
  for (const PolyFace& f : kept)
    for (int v : f.cycle) used[v] = 1;
  for (size_t i = 0; i < verts_.size(); ++i)
    if (used[i] && sgn_[i] == 0) on.push_back((int)i);
  if (on.size() >= 3) {
    Vec3 n{h.c1, h.c2, h.c3};
    Vec3 c{0, 0, 0};
    for (int v : on)
      for (int k = 0; k < 3; ++k) c[k] += verts_[v][k];
    for (int k = 0; k < 3; ++k) c[k] /= (long)on.size();
    Vec3 ref = sub(verts_[on[0]], c);
    auto half = [&](const Vec3& p) {
      int s = sgn(dot(cross(ref, p), n));
      if (s > 0) return 0;
      if (s == 0 && sgn(dot(ref, p)) > 0) return 0;
      return 1;
    };
    std::vector<std::pair<int, Vec3>> pts;
    for (int v : on) pts.push_back({v, sub(verts_[v], c)});
    std::sort(pts.begin(), pts.end(), [&](const auto& x, const auto& y) {
      int hx = half(x.second), hy = half(y.second);
      if (hx != hy) return hx < hy;
      return sgn(dot(cross(x.second, y.second), n)) > 0;
    });
    PolyFace nf;
    nf.label = label;
    nf.plane = h;
    for (auto& p : pts) nf.cycle.push_back(p.first);
    kept.push_back(std::move(nf));
  }
  faces_ = std::move(kept);
  ++cuts_;
  compact();
  return true;
}

void ConvexPolyhedron::compact() {
  std::vector<int> remap(verts_.size(), -1);
  std::vector<Vec3> nv;
  std::vector<std::array<double, 3>> na;
  for (PolyFace& f : faces_)
    for (int& v : f.cycle) {
      if (remap[v] < 0) {
        remap[v] = (int)nv.size();
        nv.push_back(verts_[v]);
        na.push_back(approx_[v]);
      }
      v = remap[v];
    }
  verts_ = std::move(nv);
  approx_ = std::move(na);
}

std::vector<PolyEdge> ConvexPolyhedron::edges() const {
  std::map<std::pair<int, int>, PolyEdge> m;
  for (size_t fi = 0; fi < faces_.size(); ++fi) {
    const auto& cyc = faces_[fi].cycle;
    for (size_t i = 0; i < cyc.size(); ++i) {
      int u = cyc[i], w = cyc[(i + 1) % cyc.size()];
      auto key = std::minmax(u, w);
      auto it = m.find(key);
      if (it == m.end()) {
        PolyEdge e;
        e.u = u;
        e.w = w;
        e.f1 = (int)fi;
        m.emplace(key, e);
      } else {
        if (it->second.f2 >= 0) throw Error(ErrorKind::InconsistentGluing, "edge in more than two faces");
        it->second.f2 = (int)fi;
      }
    }
  }
  std::vector<PolyEdge> out;
  for (auto& [k, e] : m) {
    if (e.f2 < 0) throw Error(ErrorKind::InconsistentGluing, "edge in only one face");
    out.push_back(e);
  }
  return out;
}

}  // namespace bianchi
