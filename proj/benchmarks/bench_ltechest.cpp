// SPDX-License-Identifier: Apache-2.0
//
// ltechest: pilot-aided OFDM channel estimation for LTE downlink links
// Copyright (C) 2026 The ltechest authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "ltechest/channel.hpp"
#include "ltechest/estimators.hpp"
#include "ltechest/grid.hpp"
#include "ltechest/harness.hpp"
#include "ltechest/scenario_config.hpp"
#include "ltechest/svr.hpp"

namespace
{

using namespace ltechest;

Bits random_bits(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    Bits bits(count);
    for (auto &b : bits)
        b = static_cast<std::uint8_t>(rng() & 1U);
    return bits;
}

ComplexGrid received_frame(const OfdmConfig &config, std::uint64_t seed)
{
    const Bits bits = random_bits(config.data_bits_per_frame(), seed);
    const TimeSignal tx = modulate_frame(build_resource_grid(config, modulate_bits(bits, config)).symbols, config);
    const auto channel = generate_channel(PowerDelayProfile::eva(), 696.8, tx.samples.size(),
                                          config.sampling_rate_hz, seed + 1);
    return demodulate_frame(add_awgn(apply_channel(tx, channel), 20.0, seed + 2), config);
}

void BM_ModulateFrame(benchmark::State &state)
{
    const OfdmConfig config = lte_config(5.0);
    const ResourceGrid grid =
        build_resource_grid(config, modulate_bits(random_bits(config.data_bits_per_frame(), 1), config));
    for (auto _ : state)
        benchmark::DoNotOptimize(modulate_frame(grid.symbols, config));
}
BENCHMARK(BM_ModulateFrame)->Unit(benchmark::kMicrosecond);

void BM_GenerateEvaChannel(benchmark::State &state)
{
    const auto samples = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_channel(PowerDelayProfile::eva(), 696.8, samples, 7.68e6, ++seed));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateEvaChannel)->Arg(7680)->Arg(76800)->Unit(benchmark::kMillisecond);

void BM_SolveDual(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    SvrHyperparams params;
    std::vector<int> positions(n);
    for (std::size_t i = 0; i < n; ++i)
        positions[i] = static_cast<int>(6 * i);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> normal(0.0, 0.7);
    std::vector<Complex> values(n);
    for (auto &v : values)
        v = {normal(rng), normal(rng)};
    const PilotObservations obs{positions, values};
    const Eigen::MatrixXd gram = gram_matrix(obs.positions, params.kernel_sigma);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_dual(gram, obs, params));
}
BENCHMARK(BM_SolveDual)->Arg(16)->Arg(51)->Unit(benchmark::kMicrosecond);

void BM_EstimateFrame(benchmark::State &state)
{
    const OfdmConfig config = lte_config(5.0);
    const ComplexGrid rx = received_frame(config, 3);
    const SvrHyperparams params;
    const auto method = static_cast<Method>(state.range(0));
    for (auto _ : state)
    {
        switch (method)
        {
        case Method::ls:
            benchmark::DoNotOptimize(ls_estimate_frame(rx, config));
            break;
        case Method::decision_feedback:
            benchmark::DoNotOptimize(decision_feedback_estimate(rx, config));
            break;
        case Method::svr:
            benchmark::DoNotOptimize(svr_estimate_frame(rx, config, params));
            break;
        }
    }
    state.SetLabel(std::string(method_name(method)));
}
BENCHMARK(BM_EstimateFrame)
    ->Arg(static_cast<int>(Method::ls))
    ->Arg(static_cast<int>(Method::decision_feedback))
    ->Arg(static_cast<int>(Method::svr))
    ->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
