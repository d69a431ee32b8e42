#include <algorithm>
#include <string>

#include "bianchi/bianchi_data.hpp"
#include "bianchi/errors.hpp"

namespace bianchi {

namespace {

struct RawMatrix {
  const char* a;
  const char* b;
  const char* c;
  const char* e;
};

struct RawGroup {
  int64_t d;
  std::vector<const char*> gens;
  std::vector<RawMatrix> matrices;
  std::vector<const char*> relators;
  std::vector<std::pair<const char*, const char*>> peripherals;
  const char* ell;
};

const RawMatrix kA{"0", "-1", "1", "0"};
const RawMatrix kT{"1", "1", "0", "1"};
const RawMatrix kU{"1", "w", "0", "1"};

const std::vector<RawGroup>& raw_groups() {
  static const std::vector<RawGroup> groups = {
      {1,
       {"a", "l", "t", "u"},
       {kA, {"-w", "0", "0", "w"}, kT, kU},
       {"a^2", "l^2", "(t*l)^2", "(u*l)^2", "(a*l)^2", "(t*a)^3", "(u*a*l)^3", "(t,u)"},
       {{"t", "u"}},
       "l"},
      {2, {"a", "t", "u"}, {kA, kT, kU}, {"a^2", "(t*a)^3", "(a*u^-1*a*u)^2", "(t,u)"}, {{"t", "u"}}, nullptr},
      {3,
       {"a", "l", "t", "u"},
       {kA, {"-w", "0", "0", "w-1"}, kT, {"1", "w-1", "0", "1"}},
       {"(t,u)", "a^2", "(a*l)^2", "(t*a)^3", "l^3", "(u*a*l)^3", "l^-1*t*l*u*t", "l^-1*u*l*t^-1"},
       {{"t", "u"}},
       "l"},
      {5,
       {"a", "b", "c", "t", "u"},
       {kA, {"-w", "2", "2", "w"}, {"-w-4", "-2*w", "2*w", "w-4"}, kT, kU},
       {"(t,u)", "a^2", "b^2", "(t*a)^3", "(a*b)^2", "(a*u*b*u^-1)^2", "a*c*a*t*c^-1*t^-1",
        "u*b*u^-1*c*b*t*c^-1*t^-1"},
       {{"t", "u"}, {"t*b", "t*u^-1*c*t^-1"}},
       nullptr},
      {6,
       {"a", "t", "u", "b", "c"},
       {kA, kT, kU, {"-1-w", "2-w", "2", "1+w"}, {"5", "-2*w", "2*w", "5"}},
       {"a^2", "b^2", "(t,u)", "(t*a)^3", "(a,c)", "t^-1*c*t*u*b*u^-1*c^-1*b^-1", "(a*t*b)^3",
        "(a*t*u*b*u^-1)^3"},
       {{"t", "u"}, {"t*b", "(c*u)^-1"}},
       nullptr},
      {7, {"a", "t", "u"}, {kA, kT, kU}, {"a^2", "(t*a)^3", "(a*t*u^-1*a*u)^2", "(t,u)"}, {{"t", "u"}}, nullptr},
      {11, {"a", "t", "u"}, {kA, kT, kU}, {"a^2", "(t*a)^3", "(a*t*u^-1*a*u)^3", "(t,u)"}, {{"t", "u"}}, nullptr},
      {15,
       {"a", "c", "t", "u"},
       {kA, {"4", "1-2*w", "2*w-1", "4"}, kT, kU},
       {"(t,u)", "(a,c)", "a^2", "(t*a)^3", "u*c*u*a*t*u^-1*c^-1*u^-1*a*t^-1"},
       {{"t", "u"}, {"u*c*a", "c^-1*a*u^-1*c^-1*u^-1*t*a"}},
       nullptr},
      {19,
       {"a", "b", "t", "u"},
       {kA, {"1-w", "2", "2", "w"}, kT, kU},
       {"a^2", "(t*a)^3", "b^3", "(b*t^-1)^3", "(a*b)^2", "(a*t^-1*u*b*u^-1)^2", "(t,u)"},
       {{"t", "u"}},
       nullptr},
      {23,
       {"g1", "g2", "g3", "g4", "g5"},
       {{"1", "-1+w", "0", "1"},
        {"1", "1", "0", "1"},
        {"0", "1", "-1", "1"},
        {"3+w", "-4+w", "-2+w", "-1-w"},
        {"5-w", "1+2*w", "2+w", "-3+w"}},
       {"g3^3", "(g3*g2)^2", "(g1,g2)", "(g4,g5)", "g5*g2^-1*g3^-1*g5^-1*g1^-1*g2^-1*g3^-1*g1",
        "g4^-1*g5*g3*g2*g5^-1*g2*g4*g3"},
       {{"g2", "g1"}, {"g4", "g5"}, {"g4*g3*g2", "g2^-1*g5*g3*g2"}},
       nullptr},
      {31,
       {"g1", "g2", "g3", "g4", "g5"},
       {{"1", "-1", "0", "1"},
        {"0", "1", "-1", "1"},
        {"1", "w", "0", "1"},
        {"3", "-2+2*w", "w", "-5"},
        {"3-2*w", "7+w", "4", "-1+2*w"}},
       {"(g1,g3)", "g2^3", "(g2*g1^-1)^2", "(g5,g4)",
        "g4*g1^-1*g3^-1*g2*g3*g4^-1*g2*g4*g3^-1*g1^-1*g2*g3*g4^-1*g2",
        "g5*g3^-1*g2*g3*g4^-1*g2*g1^-1*g5^-1*g2^-1*g4*g3^-1*g2^-1*g3*g1",
        "g2*g3*g4^-1*g2*g1^-1*g4*g3^-1*g2*g3*g4^-1*g1*g2^-1*g4*g3^-1"},
       {{"g1", "g3"}, {"g4", "g5"}, {"g1*g5", "g3^-1*g2*g3*g4^-1*g2*g5"}},
       nullptr},
      {39,
       {"g1", "g2", "g3", "g4", "g5", "g6", "g7"},
       {{"1", "1", "0", "1"},
        {"1", "w", "0", "1"},
        {"0", "1", "-1", "1"},
        {"-3-w", "7-2*w", "2-w", "5+w"},
        {"3-w", "2+w", "3", "-1+w"},
        {"7-w", "2+3*w", "2+w", "-5+w"},
        {"6-w", "-1+2*w", "1-2*w", "5+w"}},
       {"g3^3", "(g4,g6)", "(g3*g5)^2", "(g2,g1)", "(g1^-1*g3^-1)^2", "(g3^-1,g7^-1)", "(g5^-1*g1)^3",
        "g5^-1*g1*g6^-1*g4^-1*g5*g4*g1^-1*g6", "g4^-1*g5*g4*g2^-1*g7*g5^-1*g7^-1*g2", "(g7*g5^-1*g7^-1*g1)^3",
        "g6*g1^-1*g5*g6^-1*g4^-1*g5*g4*g1^-1*g4^-1*g5*g4*g1^-1"},
       {{"g1", "g2"}, {"g4", "g6"}, {"g5^-1*g6", "g4*g1^-1*g6"}, {"g5", "g4*g2^-1*g7"}},
       nullptr},
      {47,
       {"g1", "g2", "g3", "g4", "g5", "g6", "g7"},
       {{"-1", "1", "-1", "0"},
        {"1", "1", "0", "1"},
        {"1", "-1+w", "0", "1"},
        {"-2+w", "5", "-3", "1+w"},
        {"5", "-3+3*w", "w", "-7"},
        {"-4+w", "3+w", "-3-w", "-4+w"},
        {"1-2*w", "11+w", "4", "-3+2*w"}},
       {"g1^3", "(g3,g2)", "(g2^-1*g1)^2", "(g5,g7)", "g2^-1*g1*g6*g1^-1*g2*g6^-1",
        "g6*g2^-1*g4^-1*g5*g3^-1*g6^-1*g4*g2*g3*g5^-1",
        "g7^-1*g2^-1*g5^-1*g4*g1*g4^-1*g2*g7*g4*g1^-1*g4^-1*g5",
        "g3*g5^-1*g4*g1*g4^-1*g2*g5*g3^-1*g2^-1*g4^-1*g1^-1*g4",
        "g5^-1*g4*g1*g4^-1*g7^-1*g2^-1*g4*g1^-1*g4^-1*g5*g3^-1*g2*g3*g7"},
       {{"g2", "g3"},
        {"g5", "g7"},
        {"g2*g7", "g4*g1^-1*g4^-1*g5"},
        {"g6*g2^-1*g4^-1", "g5*g3^-1*g2^-1*g4^-1"},
        {"g6^-1*g1^-1*g4", "g3*g5^-1*g4*g1"}},
       nullptr},
      {71,
       {"g1", "g2", "g3", "g4", "g5", "g6", "g7", "g8", "g9"},
       {{"-5", "5-3*w", "-1+w", "-10-w"},
        {"-3+2*w", "-17-w", "-4", "1-2*w"},
        {"5", "-2*w", "1-w", "-7"},
        {"-5", "2+w", "-2-w", "-3+w"},
        {"-6-3*w", "13-2*w", "5-w", "4+w"},
        {"-1+2*w", "12", "-6", "-1+2*w"},
        {"1", "-1", "0", "1"},
        {"0", "-1", "1", "-1"},
        {"1+w", "-7", "3", "-2+w"}},
       {"g8^3", "(g8^-1,g4)", "(g8*g7^-1)^2", "g1^-1*g3*g7*g3^-1*g1*g7^-1", "g6*g3*g6^-1*g7*g9^-1*g3^-1*g9*g7^-1",
        "g7^-1*g6*g3*g6^-1*g5^-1*g2*g7*g5*g6*g3^-1*g6^-1*g2^-1",
        "g8*g7^-1*g1*g5*g6*g3^-1*g1*g5*g7*g8^-1*g5^-1*g1^-1*g3*g6^-1*g5^-1*g1^-1",
        "g4^-1*g7^-1*g5^-1*g2*g1^-1*g3*g7*g9*g4*g1*g7^-1*g2^-1*g5*g7*g9^-1*g3^-1",
        "g5*g8*g7^-1*g5^-1*g1^-1*g7*g9*g6*g1*g5*g8*g7^-1*g5^-1*g1^-1*g3*g6^-1*g9^-1*g7^-1*g3^-1*g1",
        "g2*g6*g1*g5*g7*g8^-1*g5^-1*g1^-1*g3*g6^-1*g7*g8^-1*g5^-1*g2^-1*g5*g7*g8^-1*g5^-1*g1^-1*g7*g8^-1*g1*g5*g6*"
        "g3^-1*g6^-1"},
       {{"g7", "g1^-1*g3"},
        {"g2", "g6*g1*g5*g7*g8^-1*g5^-1*g1^-1*g3*g6^-1*g7*g8^-1*g5^-1"},
        {"g3", "g6^-1*g7*g9^-1"},
        {"g7*g2", "g6*g3*g6^-1*g5^-1*g7^-1"},
        {"g7*g9*g6", "g3^-1*g1*g5*g8*g7^-1*g5^-1*g1^-1"},
        {"g3*g9*g4", "g4^-1*g7^-1*g5^-1*g2*g7*g1^-1"},
        {"g4*g1*g7^-1*g2^-1*g5*g7*g9^-1*g3^-1*g8^-1*g4^-1",
         "g6*g3^-1*g1*g5*g8*g7^-1*g5^-1*g1^-1*g6^-1*g9^-1*g8^-1*g4^-1"}},
       nullptr},
  };
  return groups;
}

QuadInt quad(int64_t d, const char* s) { return parse_quad_int(d, s); }

}  // namespace

const std::vector<int64_t>& bundled_bianchi_d() {
  static const std::vector<int64_t> ds = [] {
    std::vector<int64_t> v;
    for (const RawGroup& g : raw_groups()) v.push_back(g.d);
    return v;
  }();
  return ds;
}

bool has_bianchi_data(int64_t d) {
  const auto& v = bundled_bianchi_d();
  return std::find(v.begin(), v.end(), d) != v.end();
}

BianchiGroup bianchi_data(int64_t d) {
  for (const RawGroup& raw : raw_groups()) {
    if (raw.d != d) continue;
    BianchiGroup G;
    G.d = d;
    for (const char* g : raw.gens) G.presentation.gens.push_back(g);
    for (const RawMatrix& m : raw.matrices)
      G.matrices.emplace_back(quad(d, m.a), quad(d, m.b), quad(d, m.c), quad(d, m.e));
    for (const char* r : raw.relators) G.presentation.relators.push_back(G.parse(r));
    for (auto& [p1, p2] : raw.peripherals) G.peripherals.push_back({G.parse(p1), G.parse(p2)});
    if (raw.ell) G.ell = G.parse(raw.ell);
    return G;
  }
  throw Error(ErrorKind::UnsupportedD, "no bundled presentation for d=" + std::to_string(d));
}

ProjMatrix word_matrix(const BianchiGroup& G, const Word& w) {
  ProjMatrix m = ProjMatrix::identity(G.d);
  for (int x : w) {
    const ProjMatrix& g = G.matrices.at(std::abs(x) - 1);
    m = m * (x > 0 ? g : g.inverse());
  }
  return m;
}

namespace {

ProjKey key_pow(const PslQuotient& Q, ProjKey g, int64_t e) {
  if (e < 0) {
    g = Q.inverse(g);
    e = -e;
  }
  ProjKey r = Q.identity();
  while (e > 0) {
    if (e & 1) r = Q.mul(r, g);
    g = Q.mul(g, g);
    e >>= 1;
  }
  return r;
}

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

bool validate_peripheral_triple(const BianchiGroup& G, const QuadIdeal& I, int cusp, PeripheralTriple t) {
  if (cusp < 0 || cusp >= G.cusp_classes()) return false;
  if (t.n <= 0 || t.l == 0) return false;
  if (t.l < 0) {
    t.k = -t.k;
    t.l = -t.l;
  }
  PslQuotient Q(I);
  ProjKey p1 = Q.key(word_matrix(G, G.peripherals[cusp].p1));
  ProjKey p2 = Q.key(word_matrix(G, G.peripherals[cusp].p2));
  const ProjKey id = Q.identity();
  if (key_pow(Q, p1, t.n) != id) return false;
  if (Q.mul(key_pow(Q, p1, t.k), key_pow(Q, p2, t.l)) != id) return false;
  // window t*k/l <= s < n + t*k/l, 0 <= tt < l
  ProjKey p2t = id;
  for (int64_t tt = 0; tt < t.l; ++tt) {
    int64_t s0 = -floor_div(-tt * t.k, t.l);  // ceil(tt*k/l)
    ProjKey x = Q.mul(key_pow(Q, p1, s0), p2t);
    for (int64_t s = s0; s * t.l < t.n * t.l + tt * t.k; ++s) {
      if ((s != 0 || tt != 0) && x == id) return false;
      x = Q.mul(p1, x);
    }
    p2t = Q.mul(p2t, p2);
  }
  return true;
}

bool validate_peripheral_triple(int64_t d, const QuadIdeal& I, int cusp, PeripheralTriple t) {
  return validate_peripheral_triple(bianchi_data(d), I, cusp, t);
}

PeripheralTriple find_peripheral_triple(const BianchiGroup& G, const QuadIdeal& I, int cusp) {
  PslQuotient Q(I);
  ProjKey p1 = Q.key(word_matrix(G, G.peripherals.at(cusp).p1));
  ProjKey p2 = Q.key(word_matrix(G, G.peripherals.at(cusp).p2));
  const ProjKey id = Q.identity();
  std::vector<ProjKey> powers{id};  // p1^s for 0 <= s < n
  for (ProjKey x = p1; x != id; x = Q.mul(x, p1)) powers.push_back(x);
  PeripheralTriple t;
  t.n = (int64_t)powers.size();
  ProjKey p2l = id;
  for (t.l = 1;; ++t.l) {
    p2l = Q.mul(p2l, p2);
    ProjKey target = Q.inverse(p2l);  // p1^k = p2^-l
    for (int64_t k = 0; k < t.n; ++k)
      if (powers[k] == target) {
        t.k = k;
        return t;
      }
  }
}

std::vector<PeripheralTriple> broadcast_triples(const BianchiGroup& G, const std::vector<PeripheralTriple>& triples) {
  if ((int)triples.size() == G.cusp_classes()) return triples;
  if (triples.size() == 1 && (G.d == 5 || G.d == 6))
    return std::vector<PeripheralTriple>(G.cusp_classes(), triples[0]);
  throw Error(ErrorKind::UsageError, "expected " + std::to_string(G.cusp_classes()) + " peripheral triples for d=" +
                                         std::to_string(G.d) + ", got " + std::to_string(triples.size()));
}

std::pair<Word, Word> peripheral_lattice(const BianchiGroup& G, int cusp, PeripheralTriple t) {
  const PeripheralPair& P = G.peripherals.at(cusp);
  return {word_pow(P.p1, t.n), word_concat(word_pow(P.p1, t.k), word_pow(P.p2, t.l))};
}

Presentation build_BI(const BianchiGroup& G, const std::vector<PeripheralTriple>& triples) {
  std::vector<PeripheralTriple> ts = broadcast_triples(G, triples);
  Presentation B = G.presentation;
  for (int i = 0; i < G.cusp_classes(); ++i) {
    auto [x, y] = peripheral_lattice(G, i, ts[i]);
    B.relators.push_back(x);
    B.relators.push_back(y);
  }
  return B;
}

Presentation build_BI(int64_t d, const std::vector<PeripheralTriple>& triples) {
  return build_BI(bianchi_data(d), triples);
}

}  // namespace bianchi
