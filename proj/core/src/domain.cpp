#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "bianchi/domain.hpp"
#include "bianchi/errors.hpp"
#include "json.hpp"

namespace bianchi {

using nlohmann::json;

FundamentalDomain barycentric_export(const DirichletDomain& D) {
  const auto& faces = D.poly.faces();
  std::vector<int> base(faces.size() + 1, 0);
  for (size_t f = 0; f < faces.size(); ++f) base[f + 1] = base[f] + 2 * (int)faces[f].cycle.size();

  auto index = [&](int f, int i, int s) {
    int m = (int)faces[f].cycle.size();
    i = ((i % m) + m) % m;
    return base[f] + 2 * i + s;
  };
  // Flag (v, {v,w}, f) as simplex index.
  auto flag = [&](int f, int v, int w) {
    const auto& cyc = faces[f].cycle;
    int m = (int)cyc.size();
    for (int i = 0; i < m; ++i) {
      int a = cyc[i], b = cyc[(i + 1) % m];
      if (a == v && b == w) return index(f, i, 0);
      if (b == v && a == w) return index(f, i, 1);
    }
    throw Error(ErrorKind::InconsistentGluing, "flag not found on face");
  };
  auto other_face = [&](int f, int u, int w) {
    for (const PolyEdge& e : D.edges)
      if ((e.u == u && e.w == w) || (e.u == w && e.w == u)) return e.f1 == f ? e.f2 : e.f1;
    throw Error(ErrorKind::InconsistentGluing, "edge not found");
  };

  FundamentalDomain F;
  F.d = D.d;
  F.simplices.resize(base.back());
  for (size_t f = 0; f < faces.size(); ++f) {
    const auto& cyc = faces[f].cycle;
    int m = (int)cyc.size();
    for (int i = 0; i < m; ++i) {
      int a = cyc[i], b = cyc[(i + 1) % m];
      int fo = other_face((int)f, a, b);
      int fm = D.mate[f];
      int ai = D.vertex_image[f][i], bi = D.vertex_image[f][(i + 1) % m];
      for (int s = 0; s < 2; ++s) {
        int v = s ? b : a, w = s ? a : b;
        DomainSimplex& S = F.simplices[index((int)f, i, s)];
        S.neighbors[0] = index((int)f, i, 1 - s);
        S.neighbors[1] = s ? index((int)f, i + 1, 0) : index((int)f, i - 1, 1);
        S.neighbors[2] = flag(fo, v, w);
        S.mate = s ? flag(fm, bi, ai) : flag(fm, ai, bi);
        S.matrix = D.face_matrix[f];
        S.ideal_vertex = D.ideal[v];
      }
    }
  }
  assign_singular_orders(F);
  validate_domain(F);
  return F;
}

EdgeWalk walk_domain_edge(const FundamentalDomain& F, int j, int a, int b) {
  int c[2], k = 0;
  for (int v = 0; v < 4; ++v)
    if (v != a && v != b) c[k++] = v;
  EdgeWalk W;
  W.holonomy = ProjMatrix::identity(F.d);
  int cur = j, which = 0;
  const int guard = 4 * (int)F.size() + 8;
  for (;;) {
    int face = c[which];
    const DomainSimplex& S = F.simplices[cur];
    if (face == 3) {
      W.holonomy = W.holonomy * S.matrix;
      cur = S.mate;
    } else {
      cur = S.neighbors[face];
    }
    ++W.degree;
    which ^= 1;
    if (cur == j && which == 0) break;
    if (W.degree > guard) throw Error(ErrorKind::BadEdgeCycle, "edge walk does not close");
  }
  return W;
}

int simplex_edge_order(const DomainSimplex& s, int a, int b) {
  if (a > b) std::swap(a, b);
  if (b == 3) return 1;
  if (a == 0 && b == 1) return s.singular[0];
  if (a == 0 && b == 2) return s.singular[1];
  return s.singular[2];
}

void assign_singular_orders(FundamentalDomain& F) {
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (size_t j = 0; j < F.size(); ++j)
    for (int p = 0; p < 3; ++p) {
      EdgeWalk W = walk_domain_edge(F, (int)j, pairs[p][0], pairs[p][1]);
      int k = projective_order(W.holonomy, 3);
      if (k == 0)
        throw Error(ErrorKind::BadEdgeCycle, "holonomy " + W.holonomy.str() + " has order > 3");
      F.simplices[j].singular[p] = k;
    }
}

void validate_domain(const FundamentalDomain& F) {
  const int n = (int)F.size();
  for (int j = 0; j < n; ++j) {
    const DomainSimplex& S = F.simplices[j];
    if (S.mate < 0 || S.mate >= n || F.simplices[S.mate].mate != j)
      throw Error(ErrorKind::InconsistentGluing, "mate is not an involution at " + std::to_string(j));
    if (!(F.simplices[S.mate].matrix * S.matrix).is_pm_identity())
      throw Error(ErrorKind::InconsistentGluing, "mating matrices are not inverse at " + std::to_string(j));
    QuadInt det = S.matrix.det();
    if (det.a != 1 || det.b != 0)
      throw Error(ErrorKind::InconsistentGluing, "mating matrix has determinant != 1 at " + std::to_string(j));
    for (int f = 0; f < 3; ++f) {
      int t = S.neighbors[f];
      if (t < 0 || t >= n || t == j || F.simplices[t].neighbors[f] != j)
        throw Error(ErrorKind::InconsistentGluing, "face gluing is not an involution at " + std::to_string(j));
    }
  }
}

namespace {

json quad_json(const QuadInt& x) { return json::array({x.a, x.b}); }

QuadInt quad_from(int64_t d, const json& j) { return QuadInt(d, j.at(0).get<int64_t>(), j.at(1).get<int64_t>()); }

}  // namespace

std::string domain_to_json(const FundamentalDomain& F) {
  json out;
  out["format_version"] = kDomainFormatVersion;
  out["d"] = F.d;
  out["omega_convention"] = F.omega_convention;
  json arr = json::array();
  for (const DomainSimplex& S : F.simplices) {
    json s;
    s["mate"] = S.mate;
    s["matrix"] = json::array({quad_json(S.matrix.a), quad_json(S.matrix.b), quad_json(S.matrix.c), quad_json(S.matrix.e)});
    s["singular"] = S.singular;
    s["ideal_vertex"] = S.ideal_vertex;
    s["neighbors"] = S.neighbors;
    arr.push_back(std::move(s));
  }
  out["simplices"] = std::move(arr);
  return out.dump(1) + "\n";
}

FundamentalDomain domain_from_json(const std::string& text) {
  FundamentalDomain F;
  try {
    json in = json::parse(text);
    F.d = in.at("d").get<int64_t>();
    F.omega_convention = in.value("omega_convention", std::string("omega_d"));
    for (const json& s : in.at("simplices")) {
      DomainSimplex S;
      S.mate = s.at("mate").get<int>();
      const json& m = s.at("matrix");
      S.matrix = ProjMatrix(quad_from(F.d, m.at(0)), quad_from(F.d, m.at(1)), quad_from(F.d, m.at(2)),
                            quad_from(F.d, m.at(3)));
      S.singular = s.at("singular").get<std::array<int, 3>>();
      S.ideal_vertex = s.at("ideal_vertex").get<bool>();
      S.neighbors = s.at("neighbors").get<std::array<int, 3>>();
      F.simplices.push_back(S);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("domain file: ") + e.what());
  }
  validate_domain(F);
  return F;
}

FundamentalDomain load_or_compute_domain(int64_t d, const std::string& cache_dir, bool* from_cache) {
  namespace fs = std::filesystem;
  if (from_cache) *from_cache = false;
  const std::string prefix = "domain_d" + std::to_string(d) + "_r";
  const std::string suffix = "_v" + std::to_string(kDomainFormatVersion) + ".json";
  if (!cache_dir.empty() && fs::is_directory(cache_dir)) {
    std::vector<fs::path> hits;
    for (const auto& ent : fs::directory_iterator(cache_dir)) {
      std::string name = ent.path().filename().string();
      if (name.rfind(prefix, 0) == 0 && name.size() > suffix.size() &&
          name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
        hits.push_back(ent.path());
    }
    std::sort(hits.begin(), hits.end());
    for (const auto& p : hits) {
      std::ifstream in(p);
      std::stringstream ss;
      ss << in.rdbuf();
      try {
        FundamentalDomain F = domain_from_json(ss.str());
        if (F.d == d) {
          if (from_cache) *from_cache = true;
          return F;
        }
      } catch (const Error&) {
      }
    }
  }
  DirichletDomain D = verified_dirichlet_domain(d);
  FundamentalDomain F = barycentric_export(D);
  if (!cache_dir.empty()) {
    fs::create_directories(cache_dir);
    fs::path out = fs::path(cache_dir) / (prefix + std::to_string(D.sample_radius) + suffix);
    fs::path tmp = out;
    tmp += ".tmp";
    {
      std::ofstream o(tmp);
      o << domain_to_json(F);
    }
    fs::rename(tmp, out);
  }
  return F;
}

}  // namespace bianchi
