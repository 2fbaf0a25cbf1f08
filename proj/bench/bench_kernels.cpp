/*
 * Copyright 2026 The altsha Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial versus OpenMP execution of the enumeration and Monte Carlo kernels.

#include <benchmark/benchmark.h>

#include "altsha/curves.hpp"
#include "altsha/matrix_counting.hpp"
#include "altsha/model_sampler.hpp"

namespace {

using altsha::Execution;

Execution mode(const benchmark::State& s) { return s.range(0) ? Execution::parallel : Execution::serial; }

void BM_CountBox(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(altsha::count_alternating_by_rank(4, 5, altsha::Norm::box, altsha::kCountingCap, mode(state)));
}
BENCHMARK(BM_CountBox)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CountL2(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(altsha::count_alternating_by_rank(4, 12, altsha::Norm::l2, altsha::kCountingCap, mode(state)));
}
BENCHMARK(BM_CountL2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CountCurves(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(altsha::count_curves_exact(1'000'000, altsha::kCurveCountCap, mode(state)));
}
BENCHMARK(BM_CountCurves)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Corank(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        altsha::empirical_corank_prob(6, 4, 2, altsha::CorankMode::monte_carlo, 50'000, 1, mode(state)));
}
BENCHMARK(BM_Corank)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ShaDistribution(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(altsha::empirical_sha_distribution(8, 10'000, 0, 2, 1'000, 1, mode(state)));
}
BENCHMARK(BM_ShaDistribution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ClDistribution(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(altsha::empirical_cl_distribution(8, 2, 8, 20'000, 1, mode(state)));
}
BENCHMARK(BM_ClDistribution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
