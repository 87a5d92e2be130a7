#include <benchmark/benchmark.h>

#include <cmath>

#include "fcl/fracops_field.hpp"

namespace {

using fcl::fracops::Exec;

fcl::GridFunction field(int n) {
  const auto tg = fcl::TimeGrid::make(1.0, n);
  const auto xg = fcl::SpaceGrid::make(0.0, M_PI, 64);
  return fcl::GridFunction::sample(tg, xg, [](double t, double x) { return std::exp(-t) * std::sin(x) + t * x; });
}

Exec exec_of(const benchmark::State& s) { return s.range(1) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_CaputoDerivative(benchmark::State& state) {
  const auto u = field(static_cast<int>(state.range(0)));
  const Exec e = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(fcl::fracops::caputo_left_derivative(u, 0.5, e));
  state.SetLabel(e == Exec::Serial ? "serial" : "parallel");
}

void BM_RightIntegral(benchmark::State& state) {
  const auto u = field(static_cast<int>(state.range(0)));
  const Exec e = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(fcl::fracops::right_frac_integral(u, 0.5, e));
  state.SetLabel(e == Exec::Serial ? "serial" : "parallel");
}

void BM_JIntegral(benchmark::State& state) {
  const auto u = field(static_cast<int>(state.range(0)));
  const Exec e = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(fcl::fracops::j_integral(u, u, 0.5, e));
  state.SetLabel(e == Exec::Serial ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_CaputoDerivative)->ArgsProduct({{128, 512}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RightIntegral)->ArgsProduct({{128, 512}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JIntegral)->ArgsProduct({{128, 256}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
