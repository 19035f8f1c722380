// Copyright 2026 The dfsmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "dfsmem/trials.h"

using namespace dfsmem;

static void BM_detect(benchmark::State &state) {
    DetectorBank bank{};
    for (auto &d : bank) {
        d = {1.0 / 3.0, 1e-5};
    }
    PhotonPattern photons{1, 0, 2, 0};
    Rng rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(detect(photons, bank, rng));
    }
}
BENCHMARK(BM_detect);

static void BM_write_trials(benchmark::State &state) {
    RunConfig cfg;
    cfg.trial_count = state.range(0);
    cfg.alpha = 0.6;
    cfg.beta = 0.8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_write_trials(cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_write_trials)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_remote_trials(benchmark::State &state) {
    RunConfig cfg;
    cfg.trial_count = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_remote_trials(cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_remote_trials)->Arg(10000)->Unit(benchmark::kMillisecond);
