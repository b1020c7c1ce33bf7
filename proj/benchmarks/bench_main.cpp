#include <benchmark/benchmark.h>

#include "vdclab/correlate.hpp"
#include "vdclab/experiments.hpp"
#include "vdclab/weyl.hpp"
#include "vdclab/zoo.hpp"

using namespace vdclab;

namespace {

Schedule up_to(std::int64_t N) { return Schedule({N / 4, N / 2, N}); }

// Dense FFT path against the sparse direct path of the correlation engine.
void BM_CesaroRotation(benchmark::State& state) {
  const std::int64_t N = state.range(0), H = state.range(1);
  const auto f = zoo_entry("rotation").orbit();
  for (auto _ : state) benchmark::DoNotOptimize(cesaro_correlation(*f, H, up_to(N)));
  state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_CesaroRotation)->Args({1 << 16, 256})->Args({1 << 20, 1024})->Unit(benchmark::kMillisecond);

void BM_CesaroSkew(benchmark::State& state) {
  const std::int64_t N = state.range(0), H = state.range(1);
  const auto f = zoo_entry("skew_lebesgue").orbit();
  for (auto _ : state) benchmark::DoNotOptimize(cesaro_correlation(*f, H, up_to(N)));
  state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_CesaroSkew)->Args({1 << 16, 256})->Args({1 << 20, 1024})->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const ZooEntry& z = zoo_entry("mixed");
  Thresholds t;
  t.H = state.range(0);
  const auto profile = cesaro_correlation(*z.orbit(), t.H, up_to(t.H * t.H));
  const auto candidates = atom_lattice(z.lattice, t.lattice_K, t.rational_den);
  for (auto _ : state) benchmark::DoNotOptimize(classify(profile, t, candidates));
}
BENCHMARK(BM_Classify)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_WeylSumSquares(benchmark::State& state) {
  const auto sq = IntegerSequenceSpec::polynomial_monomial({{0, 1}, {0, 1}, {1, 1}});
  for (auto _ : state) benchmark::DoNotOptimize(weyl_sum(sq, zoo_alpha(), state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WeylSumSquares)->Arg(100000);

void BM_StarDiscrepancy(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(star_discrepancy(IntegerSequenceSpec::identity(), zoo_alpha().value(), state.range(0)));
  }
}
BENCHMARK(BM_StarDiscrepancy)->Arg(100000);

void BM_Counterexample(benchmark::State& state) {
  RunOptions o;
  o.schedule = up_to(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_counterexample({zoo_alpha(), false}, o));
}
BENCHMARK(BM_Counterexample)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_BoxMeasureSkew(benchmark::State& state) {
  const AffineSystem skew(IntMatrix::from_rows({{1, 0}, {1, 1}}), {Phase::of(zoo_alpha()), Phase{}});
  const BoxUnion A{Box{{Arc::from_rationals({0, 1}, {1, 2}), Arc::from_rationals({0, 1}, {1, 2})}}};
  const std::vector<BoxConstraint> sets{{AffineSystem::identity(2), 0, A}, {skew, 7, A}};
  for (auto _ : state) benchmark::DoNotOptimize(box_measure(sets, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_BoxMeasureSkew)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_RkEnumerate(benchmark::State& state) {
  RkSpec spec;
  spec.k = 3;
  for (auto _ : state) benchmark::DoNotOptimize(rk_enumerate(spec, state.range(0)));
}
BENCHMARK(BM_RkEnumerate)->Arg(100000);

}  // namespace
BENCHMARK_MAIN();
