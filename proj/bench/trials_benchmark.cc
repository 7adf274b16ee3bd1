// Copyright 2026 The Poison Authors. All rights reserved.
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

// Serial reference vs OpenMP kernels: whole offline studies and the Thompson
// Sampling Monte Carlo probe.

#include <benchmark/benchmark.h>

#include <vector>

#include "poison/bandit.h"
#include "poison/experiment.h"

namespace poison {
namespace {

Execution ExecFor(const benchmark::State& state) {
  return state.range(0) ? Execution::kParallel : Execution::kSerial;
}

void BM_OfflineTrials(benchmark::State& state) {
  ExperimentConfig c = ExperimentConfig::Defaults(Mode::kOffline);
  c.algo = static_cast<Algorithm>(state.range(1));
  c.trials = 32;
  c.mc_samples = 20000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunOfflineExperiment(c, ExecFor(state)));
  }
  state.SetItemsProcessed(state.iterations() * c.trials);
}
BENCHMARK(BM_OfflineTrials)
    ->ArgNames({"parallel", "algo"})
    ->ArgsProduct({{0, 1}, {0, 1, 2}})
    ->Unit(benchmark::kMillisecond);

void BM_OnlineTrials(benchmark::State& state) {
  ExperimentConfig c = ExperimentConfig::Defaults(Mode::kOnline);
  c.gap_grid = {0.5, 1.0, 0.5};
  c.trials = 8;
  c.horizon = 10000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunOnlineExperiment(c, ExecFor(state)));
  }
  state.SetItemsProcessed(state.iterations() * 2 * c.trials);
}
BENCHMARK(BM_OnlineTrials)
    ->ArgNames({"parallel"})
    ->Arg(0)
    ->Arg(1)
    ->Unit(benchmark::kMillisecond);

void BM_PosteriorWins(benchmark::State& state) {
  const std::vector<double> means = {80.0, 79.99, 79.98, 79.97, 80.01};
  const std::vector<double> sds = {0.01, 0.01, 0.02, 0.02, 0.005};
  const int64_t samples = state.range(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        CountPosteriorWins(means, sds, samples, 7, ExecFor(state)));
  }
  state.SetItemsProcessed(state.iterations() * samples);
}
BENCHMARK(BM_PosteriorWins)
    ->ArgNames({"parallel", "samples"})
    ->ArgsProduct({{0, 1}, {100000, 1000000}})
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace poison

BENCHMARK_MAIN();
