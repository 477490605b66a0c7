#include <benchmark/benchmark.h>

#include <map>

#include "thermoset/cli/config.hpp"
#include "thermoset/conformal.hpp"
#include "thermoset/cylinders.hpp"
#include "thermoset/gaps.hpp"
#include "thermoset/pressure.hpp"

using namespace thermoset;

namespace {

const MarkovSystem& system_named(const std::string& name) {
  static std::map<std::string, MarkovSystem> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    it = cache.emplace(name, make_system(cli::load_config(name).definition)).first;
  }
  return it->second;
}

void BM_Refine(benchmark::State& state) {
  const auto& sys = system_named("nonlinear-perturbed");
  for (auto _ : state) benchmark::DoNotOptimize(refine(sys, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Refine)->DenseRange(6, 14, 4);

void BM_EnumerateWords(benchmark::State& state) {
  const auto spec = SubshiftSpec::create(3, {{1, 1}, {2, 3, 2}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_words(spec, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_EnumerateWords)->Arg(8)->Arg(10);

void BM_PressureOperator(benchmark::State& state) {
  const auto& sys = system_named("nonlinear-perturbed");
  PressureEvaluator ev(sys, static_cast<std::size_t>(state.range(0)), PressureMethod::Operator);
  for (auto _ : state) benchmark::DoNotOptimize(ev(0.6));
}
BENCHMARK(BM_PressureOperator)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_PressurePeriodic(benchmark::State& state) {
  const auto& sys = system_named("nonlinear-perturbed");
  for (auto _ : state) {
    benchmark::DoNotOptimize(pressure_periodic(sys, 0.6, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_PressurePeriodic)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_BowenRoot(benchmark::State& state) {
  const auto& sys = system_named("paper-example");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bowen_root(sys, static_cast<std::size_t>(state.range(0)), 1e-9, PressureMethod::Operator));
  }
}
BENCHMARK(BM_BowenRoot)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ConformalMeasure(benchmark::State& state) {
  const auto& sys = system_named("cantor-thirds");
  for (auto _ : state) benchmark::DoNotOptimize(conformal_measure(sys, 0.63, 10));
}
BENCHMARK(BM_ConformalMeasure)->Unit(benchmark::kMillisecond);

void BM_GapCascade(benchmark::State& state) {
  const auto& sys = system_named("paper-example");
  const auto pt = enumerate_periodic(sys, 1).front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(gap_cascade(sys, pt, Side::Plus, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_GapCascade)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
