#include <benchmark/benchmark.h>

#include "wmset/correlation.hpp"
#include "wmset/pointset.hpp"

using namespace wmset;

static void BM_GenerateVisible(benchmark::State& state) {
  const Region r = Region::box({0, 0}, state.range(0));
  for (auto _ : state) {
    Patch p = generate_visible(r);
    benchmark::DoNotOptimize(p.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(r.point_count()));
}
BENCHMARK(BM_GenerateVisible)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_GenerateFamily(benchmark::State& state) {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const Region r = Region::box({0, 0}, state.range(0));
  const std::size_t n = f.members_up_to_prime(2 * static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    Patch p = generate(f, r, n);
    benchmark::DoNotOptimize(p.size());
  }
}
BENCHMARK(BM_GenerateFamily)->Arg(250)->Unit(benchmark::kMillisecond);

static void BM_GenerateKFree(benchmark::State& state) {
  const Region r = Region::range({1}, {state.range(0)});
  for (auto _ : state) {
    Patch p = generate_kfree(2, r);
    benchmark::DoNotOptimize(p.size());
  }
}
BENCHMARK(BM_GenerateKFree)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_Autocorr(benchmark::State& state) {
  const Patch p = generate_visible(Region::box({0, 0}, state.range(0)));
  const std::vector<Shift> shifts{{1, 0}, {1, 1}, {2, 0}, {2, 1}, {3, 0}};
  for (auto _ : state) {
    AutocorrTable t = empirical_autocorr(p, shifts);
    benchmark::DoNotOptimize(t.entries.data());
  }
}
BENCHMARK(BM_Autocorr)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
