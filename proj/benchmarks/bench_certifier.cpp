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

#include "cvqnd/entanglement.hpp"

namespace {

cvqnd::UVSpec spec_for(int n) {
  cvqnd::SchemeConfig config;
  config.n = n;
  config.m = n - 1;
  config.t_o = 0.8;
  return cvqnd::uv_input(config, cvqnd::coefficient_table(config));
}

// Exhaustive cut minimization: 2^(n-1) - 1 bipartitions per call.
void BM_MinSB(benchmark::State& state) {
  const auto spec = spec_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cvqnd::min_s_b(spec));
  }
  state.SetComplexityN(1ll << (state.range(0) - 1));
}
BENCHMARK(BM_MinSB)->DenseRange(8, 24, 4)->Complexity(benchmark::oN);

void BM_Certify(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = spec_for(n);
  const auto input = cvqnd::ghz_state(n, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cvqnd::certify(spec, input));
  }
}
BENCHMARK(BM_Certify)->Arg(4)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
