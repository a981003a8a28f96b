#include <benchmark/benchmark.h>

#include <random>

#include "tamelab/eval.hpp"
#include "tamelab/galois_h1.hpp"
#include "tamelab/local_field.hpp"
#include "tamelab/tame.hpp"
#include "tamelab/vg_qe.hpp"
#include "tamelab/zeta.hpp"

using namespace tamelab;

static void BM_EliminateRandom(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::vector<FormulaPtr> fs;
  for (int i = 0; i < 64; ++i) fs.push_back(random_vg_formula(rng));
  VGModel model{state.range(0)};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(eliminate_all(fs[i++ % fs.size()], model));
}
BENCHMARK(BM_EliminateRandom)->Arg(1)->Arg(2)->Arg(6);

static void BM_ToTame(benchmark::State& state) {
  auto f = parse("(exists x:VG) (ord(a) < x & x < ord(b) & pi[2](x) = 0)");
  for (auto _ : state) benchmark::DoNotOptimize(to_tame(f));
}
BENCHMARK(BM_ToTame);

static void BM_PadicMul(benchmark::State& state) {
  auto K = FieldDesc::padic(7, static_cast<int>(state.range(0)));
  std::mt19937_64 rng(3);
  Elem a = sample(K, -3, 3, rng).truncated(state.range(0)), b = sample(K, -3, 3, rng).truncated(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_PadicMul)->Arg(8)->Arg(32)->Arg(128);

static void BM_SameOrbit(benchmark::State& state) {
  auto K = FieldDesc::padic(11, 10);
  auto action = ActionSpec::kummer(state.range(0));
  std::mt19937_64 rng(5);
  Elem x = sample(K, -4, 4, rng), y = sample(K, -4, 4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(same_orbit({x}, {y}, action, K));
}
BENCHMARK(BM_SameOrbit)->Arg(2)->Arg(3);

static void BM_IgusaExact(benchmark::State& state) {
  static const char* catalog[] = {"x", "x^2", "x*y", "x^2 + y^2", "x^2 - y^3", "x^3 + y^3"};
  auto spec = IntegralSpec::from_text(catalog[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(igusa_exact(spec, state.range(1)));
  state.SetLabel(catalog[state.range(0)]);
}
BENCHMARK(BM_IgusaExact)->ArgsProduct({{0, 1, 2, 3, 4, 5}, {5, 13}})->Unit(benchmark::kMicrosecond);

static void BM_IgusaNumeric(benchmark::State& state) {
  auto spec = IntegralSpec::from_text("x^2 - y^3");
  for (auto _ : state) benchmark::DoNotOptimize(igusa_numeric(spec, 7, 1.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_IgusaNumeric)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

static void BM_EnumerateH1(benchmark::State& state) {
  auto catalog = h1_catalog();
  const auto& action = catalog[static_cast<std::size_t>(state.range(0)) % catalog.size()].action;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_h1(action));
  state.SetLabel(catalog[static_cast<std::size_t>(state.range(0)) % catalog.size()].name);
}
BENCHMARK(BM_EnumerateH1)->DenseRange(0, 18, 3);
BENCHMARK_MAIN();
