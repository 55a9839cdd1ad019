#include <benchmark/benchmark.h>

#include "wmset/lattice.hpp"

using namespace wmset;

static void BM_Canonicalize(benchmark::State& state) {
  const LatticeBasis b = LatticeBasis::from_columns(
      {{BigInt(3), BigInt(5), BigInt(7)}, {BigInt(1), BigInt(-4), BigInt(2)}, {BigInt(0), BigInt(6), BigInt(-9)}});
  for (auto _ : state) benchmark::DoNotOptimize(canonicalize(b));
}
BENCHMARK(BM_Canonicalize);

static void BM_Intersect(benchmark::State& state) {
  const auto a = CanonicalLattice::scalar(3, 6);
  const auto b = canonicalize(LatticeBasis::from_columns(
      {{BigInt(10), BigInt(0), BigInt(0)}, {BigInt(3), BigInt(5), BigInt(0)}, {BigInt(1), BigInt(2), BigInt(7)}}));
  for (auto _ : state) benchmark::DoNotOptimize(intersect(a, b));
}
BENCHMARK(BM_Intersect);

static void BM_Contains(benchmark::State& state) {
  const auto l = canonicalize(LatticeBasis::from_columns({{BigInt(2), BigInt(1)}, {BigInt(0), BigInt(3)}}));
  const IntVec x{BigInt(40), BigInt(83)};
  for (auto _ : state) benchmark::DoNotOptimize(contains(l, x));
}
BENCHMARK(BM_Contains);
