#include "weightlab/hilbert.hpp"
#include "weightlab/maximal.hpp"
#include "weightlab/triadic.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace weightlab;

void BM_BuildWk(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_w_k(k, 2, SignRule::Greedy).measure.pieces().size());
}
BENCHMARK(BM_BuildWk)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_HilbertExact(benchmark::State& state) {
  const PiecewiseMeasure w = build_w_k(static_cast<int>(state.range(0)), 2, SignRule::Greedy).measure;
  const Rational x(1, 7);
  for (auto _ : state) benchmark::DoNotOptimize(hilbert_exact(w, x).to_double());
}
BENCHMARK(BM_HilbertExact)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_HilbertField(benchmark::State& state) {
  const HilbertField field(build_w_k(static_cast<int>(state.range(0)), 2, SignRule::Greedy).measure);
  double x = 0.1234567;
  for (auto _ : state) {
    benchmark::DoNotOptimize(field.at(detail::DD{x}).value);
    x = x < 0.9 ? x + 1e-3 : 0.1234567;
  }
}
BENCHMARK(BM_HilbertField)->Arg(2)->Arg(4)->Arg(6);

void BM_MaximalExact(benchmark::State& state) {
  const PiecewiseMeasure w = build_w_k(static_cast<int>(state.range(0)), 2, SignRule::Greedy).measure;
  const Rational x(1, 7);
  for (auto _ : state) benchmark::DoNotOptimize(maximal_exact(w, x));
}
BENCHMARK(BM_MaximalExact)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_MaximalProfile(benchmark::State& state) {
  const PiecewiseMeasure w = build_w_k(static_cast<int>(state.range(0)), 2, SignRule::Greedy).measure;
  for (auto _ : state) benchmark::DoNotOptimize(MaximalProfile(w).segments().size());
}
BENCHMARK(BM_MaximalProfile)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
