/*
 * Copyright 2026 The gbbm Authors
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

#include <benchmark/benchmark.h>

#include "gbbm/ansatz.hpp"
#include "gbbm/observables.hpp"
#include "gbbm/rng.hpp"
#include "gbbm/sampler.hpp"
#include "gbbm/training.hpp"

namespace {

using namespace gbbm;

ModelParams random_params(const CircuitSpec& spec, std::uint64_t seed) {
    return init_params(spec, seed);
}

void BM_Forward(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const CircuitSpec spec = CircuitSpec::clements(d, 1);
    const ModelParams params = random_params(spec, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward(spec, params));
    }
    state.SetComplexityN(d);
}
BENCHMARK(BM_Forward)->Arg(16)->Arg(64)->Arg(256)->Complexity(benchmark::oNCubed);

void BM_ParityExpval(benchmark::State& state) {
    const int ell = static_cast<int>(state.range(0));
    const CircuitSpec spec = CircuitSpec::clements(64, 1);
    const GaussianState out = forward(spec, random_params(spec, 2));
    std::vector<int> modes(ell);
    for (int i = 0; i < ell; ++i) {
        modes[i] = 2 * i;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(parity_expval(out, modes));
    }
}
BENCHMARK(BM_ParityExpval)->Arg(2)->Arg(8)->Arg(24);

void BM_ThresholdExpval(benchmark::State& state) {
    const int ell = static_cast<int>(state.range(0));
    const CircuitSpec spec = CircuitSpec::clements(16, 1);
    const GaussianState out = forward(spec, random_params(spec, 3));
    std::vector<int> modes(ell);
    for (int i = 0; i < ell; ++i) {
        modes[i] = i;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(threshold_expval(out, modes, 7));
    }
}
BENCHMARK(BM_ThresholdExpval)->Arg(3)->Arg(5)->Arg(7);

void BM_LossAndGradient(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const CircuitSpec spec = CircuitSpec::clements(d, 1);
    const ModelParams params = random_params(spec, 4);
    RngEngine rng = seeded_rng(5);
    BitDataset data(d);
    for (long row = 0; row < 256; ++row) {
        data.append_row();
        for (int i = 0; i < d; ++i) {
            data.set(row, i, bernoulli(rng, 0.2));
        }
    }
    const LossBatch batch =
        make_loss_batch(data, {2.0, 4.0}, 256, DetectionKind::Parity, 100000, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(loss_and_gradient(spec, params, batch));
    }
}
BENCHMARK(BM_LossAndGradient)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SampleParity(benchmark::State& state) {
    const CircuitSpec spec = CircuitSpec::clements(8, 1);
    const GaussianState out = forward(spec, random_params(spec, 6));
    RngEngine rng = seeded_rng(7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_parity(out, 1000, rng));
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SampleParity)->Unit(benchmark::kMillisecond);

void BM_ParityProbsTable(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const CircuitSpec spec = CircuitSpec::clements(d, 1);
    const GaussianState out = forward(spec, random_params(spec, 8));
    for (auto _ : state) {
        benchmark::DoNotOptimize(parity_probs(out));
    }
}
BENCHMARK(BM_ParityProbsTable)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
