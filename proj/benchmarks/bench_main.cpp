// Micro-benchmarks for the hot paths: classification ascent, multistart
// enumeration, the Hammerstein reduction, and the rank estimate.

#include <benchmark/benchmark.h>

#include "eqo/classify.hpp"
#include "eqo/gallery.hpp"
#include "eqo/hammerstein.hpp"
#include "eqo/solve.hpp"

namespace {

using namespace eqo;

void BM_ClassifySteinUlam(benchmark::State& state) {
  const QuadraticOperator q = gallery_entry("stein-ulam").problem.q;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify(q));
  }
}
BENCHMARK(BM_ClassifySteinUlam)->Unit(benchmark::kMillisecond);

void BM_EnumerateExampleIii(benchmark::State& state) {
  const QopProblem p = gallery_entry("example-iii").problem;
  EnumerateOptions opts;
  opts.starts = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_stable(p, opts));
  }
}
BENCHMARK(BM_EnumerateExampleIii)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_EnumerateProjectorK3(benchmark::State& state) {
  const QopProblem p = projector_problem(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_stable(p, {}));
  }
}
BENCHMARK(BM_EnumerateProjectorK3)->Unit(benchmark::kMillisecond);

GoursatSpec bench_spec(int m) {
  GoursatSpec s;
  s.n_basis = 2;
  s.grid = vector_t::LinSpaced(m, 0.0, 1.0);
  const vector_t t = s.grid;
  s.a = {t, (t.array() * t.array()).matrix()};
  s.b = {vector_t::Ones(m), t};
  s.c = {(0.25 * t.array()).matrix(), vector_t::Constant(m, 0.125)};
  s.d = {(0.5 * t.array()).matrix(), vector_t::Constant(m, 0.25)};
  s.e = {t, vector_t::Ones(m)};
  s.f = (t.array() + 1.0).inverse().matrix();
  return s;
}

void BM_HammersteinReduce(benchmark::State& state) {
  const GoursatSpec s = bench_spec(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduce(s, Quadrature::trapezoid()));
  }
}
BENCHMARK(BM_HammersteinReduce)->Arg(33)->Arg(129)->Unit(benchmark::kMicrosecond);

void BM_EstimateRg(benchmark::State& state) {
  const QuadraticOperator q = gallery_entry("rank2-homogeneous").problem.q;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_rg(q));
  }
}
BENCHMARK(BM_EstimateRg)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
