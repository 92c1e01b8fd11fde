// Copyright 2026 The cvqnd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "cvqnd/scheme.hpp"

namespace {

cvqnd::SchemeConfig config_for(int n) {
  cvqnd::SchemeConfig config;
  config.n = n;
  config.m = n / 2;
  config.t_o = 0.85;
  return config;
}

void BM_BuildRegister(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double t_d = *cvqnd::compatibility_closed_form(
      n, n / 2, 0.85, cvqnd::Variant::UniformLast);
  for (auto _ : state) {
    auto reg =
        cvqnd::build_register(n, n / 2, 0.85, t_d, cvqnd::Variant::UniformLast);
    benchmark::DoNotOptimize(reg);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_BuildRegister)->RangeMultiplier(2)->Range(4, 32)->Complexity();

void BM_SolveCompatibility(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cvqnd::solve_compatibility_numeric(
        n, n / 2, 0.85, cvqnd::Variant::UniformLast));
  }
}
BENCHMARK(BM_SolveCompatibility)->Arg(3)->Arg(6)->Arg(12);

void BM_RunHeisenberg(benchmark::State& state) {
  const auto config = config_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto run = cvqnd::run_heisenberg(config);
    benchmark::DoNotOptimize(run);
  }
}
BENCHMARK(BM_RunHeisenberg)->RangeMultiplier(2)->Range(4, 32);

void BM_RunAnalytic(benchmark::State& state) {
  auto config = config_for(static_cast<int>(state.range(0)));
  config.input_state = cvqnd::ghz_state(config.n, 1.0);
  config.s_a = config.s_b = 1.0;
  for (auto _ : state) {
    auto run = cvqnd::run_analytic(config);
    benchmark::DoNotOptimize(run);
  }
}
BENCHMARK(BM_RunAnalytic)->RangeMultiplier(2)->Range(4, 16);

void BM_MonteCarloTrajectories(benchmark::State& state) {
  auto config = config_for(3);
  config.m = 2;
  config.input_state = cvqnd::ghz_state(3, 1.0);
  config.s_a = config.s_b = 1.0;
  const long samples = state.range(0);
  for (auto _ : state) {
    auto result = cvqnd::run_monte_carlo(config, samples, 7);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * samples);
}
BENCHMARK(BM_MonteCarloTrajectories)->RangeMultiplier(10)->Range(1000, 100000);

}  // namespace

BENCHMARK_MAIN();
