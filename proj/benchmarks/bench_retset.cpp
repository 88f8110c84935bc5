#include <benchmark/benchmark.h>

#include <random>

#include "retset/ffield.hpp"
#include "retset/polyexp.hpp"
#include "retset/structure.hpp"
#include "retset/torus.hpp"

namespace {

using namespace retset;

torus::TorusMap frobenius_map(const ffield::Fq& F) {
  torus::TorusMap phi;
  phi.N = 2;
  phi.A = {{1, 0}, {0, 1}};
  auto t = ffield::rf_t(F);
  auto one_plus_t = ffield::rf_from_poly(
      F, ffield::p_add(F, ffield::p_one(F), ffield::p_t(F)));
  phi.beta = torus::TorusPoint::general({t, one_plus_t});
  return phi;
}

torus::LaurentVariety diag_shift_variety(const ffield::Fq& F) {
  torus::LaurentVariety V;
  V.N = 2;
  V.dim_hint = 1;
  torus::LaurentPoly poly;
  poly.terms.push_back({ffield::rf_one(F), {0, 1}});
  poly.terms.push_back({ffield::rf_neg(F, ffield::rf_one(F)), {1, 0}});
  poly.terms.push_back({ffield::rf_neg(F, ffield::rf_one(F)), {0, 0}});
  V.polys.push_back(std::move(poly));
  return V;
}

void BM_FqMul(benchmark::State& state) {
  const auto d = static_cast<unsigned>(state.range(0));
  ffield::Fq F = ffield::make_extension(2, d, 0);
  std::mt19937_64 rng(1);
  auto a = F.sample(rng), b = F.sample(rng);
  for (auto _ : state) {
    a = F.mul(a, b);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_FqMul)->Arg(1)->Arg(8)->Arg(37);

void BM_OrbitScanExact(benchmark::State& state) {
  const long long M = state.range(0);
  ffield::Fq F(2);
  auto phi = frobenius_map(F);
  auto V = diag_shift_variety(F);
  auto alpha =
      torus::TorusPoint::general({ffield::rf_one(F), ffield::rf_one(F)});
  for (auto _ : state) {
    auto res = torus::return_set(F, phi, alpha, V, M, torus::ScanMode::exact);
    benchmark::DoNotOptimize(res.ns);
  }
  state.SetComplexityN(M);
}
BENCHMARK(BM_OrbitScanExact)->Arg(256)->Arg(1024)->Arg(4096)->Complexity();

void BM_DigitPartition(benchmark::State& state) {
  recseq::LinRec u = recseq::make_linrec(
      {recseq::LinRecTerm{qpoly::identity(), mpz_class(1)}});
  std::vector<mpz_class> cs{1, 2};
  for (auto _ : state) {
    auto sols = polyexp::solve_digit_partition(u, 8, cs, state.range(0));
    benchmark::DoNotOptimize(sols.solutions);
  }
}
BENCHMARK(BM_DigitPartition)->Arg(1000)->Arg(10000);

void BM_BoundedSolver(benchmark::State& state) {
  polyexp::PolyExpEquation eq;
  eq.lhs = recseq::make_linrec(
      {recseq::LinRecTerm{qpoly::identity(), mpz_class(1)}});
  eq.rhs.push_back({1, {polyexp::Coupling{mpq_class(1), mpz_class(3)}}});
  eq.rhs.push_back({1, {polyexp::Coupling{mpq_class(1), mpz_class(3)}}});
  for (auto _ : state) {
    auto sols = polyexp::solve_bounded(eq, state.range(0), 24);
    benchmark::DoNotOptimize(sols.solutions);
  }
}
BENCHMARK(BM_BoundedSolver)->Arg(1000)->Arg(10000);

void BM_DigitCountDP(benchmark::State& state) {
  for (auto _ : state) {
    auto c = structure::count_nonzero_digits(2, 4, (1ll << 40) - 1, true);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_DigitCountDP);

}  // namespace

BENCHMARK_MAIN();
