// SPDX-License-Identifier: Apache-2.0
//
// rician-mimo: downlink multicell massive MIMO over Rician fading
// Copyright (C) 2026 The rician-mimo authors
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

#include "rician/channel.hpp"
#include "rician/detequiv.hpp"
#include "rician/limits.hpp"
#include "rician/montecarlo.hpp"
#include "rician/precoding.hpp"
#include "rician/random.hpp"

#include <benchmark/benchmark.h>

using namespace rician;

namespace
{
    Scenario scenario_with(int N, int K = 10)
    {
        ScenarioConfig c;
        c.N = N;
        c.K = K;
        return build_scenario(c);
    }
}

static void BM_ComplexNormalFill(benchmark::State &state)
{
    GaussianSource rng(7);
    cmat m(state.range(0), 10);
    for (auto _ : state)
    {
        rng.fill(m);
        benchmark::DoNotOptimize(m.data());
    }
    state.SetItemsProcessed(state.iterations() * m.size());
}
BENCHMARK(BM_ComplexNormalFill)->Arg(100)->Arg(400);

static void BM_DrawChannels(benchmark::State &state)
{
    const Scenario s = scenario_with(static_cast<int>(state.range(0)));
    std::uint64_t i = 0;
    for (auto _ : state)
    {
        GaussianSource rng(stream_seed(1, StreamTag::montecarlo, i++));
        benchmark::DoNotOptimize(draw_channels(s, rng));
    }
}
BENCHMARK(BM_DrawChannels)->Arg(100)->Arg(400);

static void BM_DrawEstimates(benchmark::State &state)
{
    const Scenario s = scenario_with(static_cast<int>(state.range(0)));
    std::uint64_t i = 0;
    for (auto _ : state)
    {
        GaussianSource rng(stream_seed(1, StreamTag::normalizer, i++));
        benchmark::DoNotOptimize(draw_estimates(s, rng));
    }
}
BENCHMARK(BM_DrawEstimates)->Arg(100)->Arg(400);

static void BM_RzfDirections(benchmark::State &state)
{
    const Scenario s = scenario_with(static_cast<int>(state.range(0)));
    GaussianSource rng(3);
    const auto est = draw_estimates(s, rng);
    const auto route = state.range(1) ? RzfRoute::resolvent : RzfRoute::coresolvent;
    for (auto _ : state)
        benchmark::DoNotOptimize(rzf_directions(est.hhat[0], s.lambda(0), route));
}
BENCHMARK(BM_RzfDirections)->Args({100, 0})->Args({100, 1})->Args({400, 0})->Args({400, 1});

static void BM_NormalizerEstimate(benchmark::State &state)
{
    const Scenario s = scenario_with(100);
    const auto scheme = state.range(0) ? Scheme::rzf : Scheme::mrt;
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_normalizer(s, scheme, 200, 1));
}
BENCHMARK(BM_NormalizerEstimate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_MonteCarloTrials(benchmark::State &state)
{
    const Scenario s = scenario_with(static_cast<int>(state.range(0)));
    const std::vector<double> norm(3, 1.0 / (s.N()));
    MonteCarloOptions opt;
    opt.trials = 100;
    for (auto _ : state)
        benchmark::DoNotOptimize(sinr_montecarlo(s, Scheme::rzf, norm, opt));
}
BENCHMARK(BM_MonteCarloTrials)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_FixedPoint(benchmark::State &state)
{
    const Scenario s = scenario_with(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_fixed_point(s, 0, s.lambda(0)));
}
BENCHMARK(BM_FixedPoint)->Arg(100)->Arg(1000)->Arg(8192)->Unit(benchmark::kMicrosecond);

static void BM_RzfDetEquiv(benchmark::State &state)
{
    const Scenario s = scenario_with(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(rzf_det_sinr(s));
}
BENCHMARK(BM_RzfDetEquiv)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_RzfLimit(benchmark::State &state)
{
    const Scenario s = scenario_with(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(rzf_limit_sinr(s));
}
BENCHMARK(BM_RzfLimit)->Arg(100)->Arg(8192)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
