#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "bianchi/bianchi_data.hpp"
#include "bianchi/certificate.hpp"
#include "bianchi/domain.hpp"
#include "bianchi/homology.hpp"
#include "bianchi/simplify.hpp"
#include "bianchi/triangulation.hpp"

using namespace bianchi;

namespace {

QuadIdeal ideal(int64_t d, const char* lit) { return ideal_from_generators(d, parse_ideal_literal(d, lit)); }

const FundamentalDomain& domain(int64_t d) {
  static std::map<int64_t, FundamentalDomain> cache;
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, load_or_compute_domain(d, BIANCHI_BENCH_CACHE)).first;
  return it->second;
}

void BM_SparseSnf(benchmark::State& state) {
  const int n = (int)state.range(0);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pos(0, n - 1), val(-3, 3);
  SparseIntMatrix A(n, n);
  for (int i = 0; i < 4 * n; ++i) A.add(pos(rng), pos(rng), val(rng));
  A.normalize();
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(A));
}
BENCHMARK(BM_SparseSnf)->Arg(50)->Arg(100)->Arg(200);

void BM_BoundarySnf(benchmark::State& state) {
  ChainComplex C = boundary_matrices(coarsen_barycentric(build_principal(domain(1), ideal(1, "3"))));
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(C.d2).rank);
}
BENCHMARK(BM_BoundarySnf)->Unit(benchmark::kMillisecond);

void BM_ToddCoxeterB7(benchmark::State& state) {
  Presentation P = build_BI(7, {{3, 0, 3}});
  for (auto _ : state) benchmark::DoNotOptimize(todd_coxeter(P, {}).index());
}
BENCHMARK(BM_ToddCoxeterB7)->Unit(benchmark::kMillisecond);

void BM_EnumeratePsl(benchmark::State& state) {
  QuadIdeal I = ideal(1, "3+3*i");
  BianchiGroup G = bianchi_data(1);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_psl(I, G.matrices).size());
}
BENCHMARK(BM_EnumeratePsl)->Unit(benchmark::kMillisecond);

void BM_BuildSimplifyHomology(benchmark::State& state) {
  const FundamentalDomain& F = domain(1);
  QuadIdeal I = ideal(1, "3");
  for (auto _ : state) {
    Triangulation T = build_principal(F, I);
    benchmark::DoNotOptimize(h1_with_quotient(simplify(T)).cusps);
  }
}
BENCHMARK(BM_BuildSimplifyHomology)->Unit(benchmark::kMillisecond);

void BM_DirichletDomain(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verified_dirichlet_domain(state.range(0)).volume);
}
BENCHMARK(BM_DirichletDomain)->Arg(1)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_VerifyLink(benchmark::State& state) {
  LinkCertificate c = load_certificate(BIANCHI_CERT_DIR "/d11_3ps11.json");
  for (auto _ : state) benchmark::DoNotOptimize(verify_link(c).cusps);
}
BENCHMARK(BM_VerifyLink)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
