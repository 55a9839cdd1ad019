#include <benchmark/benchmark.h>

#include "wmset/diffraction.hpp"
#include "wmset/family.hpp"

using namespace wmset;

static void BM_WindowMeasure(benchmark::State& state) {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t n = f.members_up_to_prime(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(window_measure(f, n));
}
BENCHMARK(BM_WindowMeasure)->Arg(100)->Arg(10000);

static void BM_Covariogram(benchmark::State& state) {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t n = f.members_up_to_prime(10000);
  for (auto _ : state) benchmark::DoNotOptimize(covariogram(f, {BigInt(6), BigInt(3)}, n));
}
BENCHMARK(BM_Covariogram);

static void BM_EmpiricalAmplitude(benchmark::State& state) {
  const Patch p = generate_visible(Region::box({0, 0}, state.range(0)));
  const RationalPoint k = RationalPoint::parse("1/6,1/6");
  for (auto _ : state) benchmark::DoNotOptimize(empirical_amplitude(p, k));
}
BENCHMARK(BM_EmpiricalAmplitude)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_InclusionExclusion(benchmark::State& state) {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t m = f.members_up_to_prime(static_cast<std::uint64_t>(state.range(0)));
  const RationalPoint k = RationalPoint::parse("1/2,1/2");
  for (auto _ : state) benchmark::DoNotOptimize(inclusion_exclusion_amplitude(f, k, m));
}
BENCHMARK(BM_InclusionExclusion)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

static void BM_SpectrumTable(benchmark::State& state) {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  DualBox box;
  box.lo = {Rational(0), Rational(0)};
  box.hi = {Rational(1), Rational(1)};
  box.include_upper = false;
  const std::size_t n = f.members_up_to_prime(10000);
  for (auto _ : state) {
    SpectrumTable t = spectrum_table(f, box, 1e-4, n);
    benchmark::DoNotOptimize(t.lines.size());
  }
}
BENCHMARK(BM_SpectrumTable)->Unit(benchmark::kMillisecond);
