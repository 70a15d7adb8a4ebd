#include <benchmark/benchmark.h>

#include "halolab/halo.hpp"
#include "halolab/maximal.hpp"

using namespace halolab;

namespace {

GeometryPtr square(std::uint32_t n) { return make_geometry({n, n}, Rational(1, n)); }

void BM_PrefixCounts(benchmark::State& state) {
  auto g = square(static_cast<std::uint32_t>(state.range(0)));
  auto set = random_set(g, Rational(1, 2), 1);
  for (auto _ : state) benchmark::DoNotOptimize(PrefixCounts(set));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g->cell_count()));
}
BENCHMARK(BM_PrefixCounts)->Arg(64)->Arg(256);

void BM_MaximalCubes(benchmark::State& state) {
  auto g = square(static_cast<std::uint32_t>(state.range(0)));
  auto set = random_set(g, Rational(1, 2), 2);
  auto fam = BasisFamily::cubes(1, 16);
  for (auto _ : state) benchmark::DoNotOptimize(maximal_field(set, fam, {kDefaultElementBudget, 1}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count_elements(fam, *g)));
}
BENCHMARK(BM_MaximalCubes)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MaximalRects(benchmark::State& state) {
  auto n = static_cast<std::uint32_t>(state.range(0));
  auto g = square(n);
  auto set = random_set(g, Rational(1, 4), 3);
  auto fam = BasisFamily::axis_rects({1, 1}, {n, n});
  for (auto _ : state) benchmark::DoNotOptimize(maximal_field(set, fam, {kDefaultElementBudget, 1}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count_elements(fam, *g)));
}
BENCHMARK(BM_MaximalRects)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SuperlevelDirect(benchmark::State& state) {
  auto g = square(static_cast<std::uint32_t>(state.range(0)));
  auto set = random_set(g, Rational(1, 2), 4);
  auto fam = BasisFamily::cubes(1, 16);
  for (auto _ : state)
    benchmark::DoNotOptimize(superlevel_direct(set, fam, Rational(2, 3), Bound::strict, {kDefaultElementBudget, 1}));
}
BENCHMARK(BM_SuperlevelDirect)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_JumpHaloRatio(benchmark::State& state) {
  auto g = make_geometry({2000}, Rational(1, 1000));
  auto fam = BasisFamily::jump_example({{1000}, {1, 2, 4}, 1});
  CellSet a(g);
  a.insert_range(0, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(halo_ratio(a, Rational(101, 100), fam, {kDefaultElementBudget, 1}));
}
BENCHMARK(BM_JumpHaloRatio)->Unit(benchmark::kMillisecond);

void BM_ExactHalo(benchmark::State& state) {
  auto n = static_cast<std::uint32_t>(state.range(0));
  auto g = make_geometry({n}, Rational(1, n));
  for (auto _ : state) benchmark::DoNotOptimize(exact_discrete_halo(Rational(5, 2), BasisFamily::intervals(), g));
  state.SetItemsProcessed(state.iterations() * ((std::int64_t{1} << n) - 1));
}
BENCHMARK(BM_ExactHalo)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
