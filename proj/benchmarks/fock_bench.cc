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

#include "dfsmem/noise.h"
#include "dfsmem/protocol.h"

using namespace dfsmem;

static void BM_step_a_optics(benchmark::State &state) {
    auto layout = MemoryLayout::build(static_cast<int>(state.range(0)));
    int n_max = static_cast<int>(state.range(0)) - 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pre_herald_state(0.01, n_max, layout));
    }
}
BENCHMARK(BM_step_a_optics)->Arg(3)->Arg(5);

static void BM_bsm(benchmark::State &state) {
    auto layout = MemoryLayout::build(3);
    auto encoded = encode_spatial(generate_entanglement(0.01, layout).state, 0.6, 0.8, layout);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bsm(encoded, layout));
    }
}
BENCHMARK(BM_bsm);

static void BM_end_to_end_fidelity(benchmark::State &state) {
    NoiseParams n;
    n.chi = 1.0 / 3.0;
    n.p_dc = 1e-5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(end_to_end_fidelity(0.01, n, 0.6, 0.8));
    }
}
BENCHMARK(BM_end_to_end_fidelity)->Unit(benchmark::kMillisecond);
