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

#ifndef RICIAN_MONTECARLO_HPP
#define RICIAN_MONTECARLO_HPP

#include "rician/common.hpp"
#include "rician/precoding.hpp"
#include "rician/scenario.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace rician
{
    enum class Provenance
    {
        mc,
        de,
        limit
    };

    std::string_view to_string(Provenance p);

    struct UeRate
    {
        int cell = 0;
        int ue = 0;
        double sinr = 0.0;
        double rate = 0.0; // bits/s/Hz
        double signal_power = 0.0;
        double interference_power = 0.0;
        bool unbounded = false; // closed-form limits with an empty denominator

        // Monte Carlo only (NaN otherwise)
        double sinr_se = std::numeric_limits<double>::quiet_NaN();
        double rate_se = std::numeric_limits<double>::quiet_NaN();
        double signal_se = std::numeric_limits<double>::quiet_NaN();
        double interference_se = std::numeric_limits<double>::quiet_NaN();
    };

    struct RateReport
    {
        Provenance provenance = Provenance::mc;
        Scheme scheme = Scheme::mrt;
        int L = 0;
        int K = 0;
        std::vector<UeRate> ues; // cell-major
        int n_trials = 0;
        double average_rate = 0.0;
        double sum_rate = 0.0;
        double average_rate_se = std::numeric_limits<double>::quiet_NaN();

        const UeRate &at(int j, int k) const { return ues[static_cast<std::size_t>(j) * K + k]; }
    };

    struct MonteCarloOptions
    {
        int trials = 2000;
        int batch_size = 50;
        std::uint64_t seed = 1;
        unsigned workers = 1; // 0 = hardware concurrency
        RzfRoute route = RzfRoute::coresolvent;
    };

    /// Per-UE Monte Carlo estimate of
    ///   gamma_jk = |E[h_jjk^H g_jk]|^2 / (1/rho_dl + sum_{l,i} E|h_ljk^H g_li|^2 - |E[h_jjk^H g_jk]|^2)
    /// with the normalizers frozen (estimated beforehand). Every trial draws fresh channels,
    /// pilot noise and estimates from its own stream (seed, trial index), so MRT and RZF
    /// runs with the same seed see identical realizations. The squared sample mean in the
    /// numerator is bias-corrected; standard errors come from batch means.
    /// Throws instability_error when an estimated denominator is not positive.
    RateReport sinr_montecarlo(const Scenario &scenario, Scheme scheme, std::span<const double> normalizer,
                               const MonteCarloOptions &options);

    struct MonteCarloRun
    {
        NormalizerEstimate normalizer;
        RateReport report;
    };

    /// Two-pass run: estimate the normalizers, then the SINRs with the frozen normalizers.
    MonteCarloRun run_montecarlo(const Scenario &scenario, Scheme scheme, const MonteCarloOptions &options,
                                 int normalizer_samples = kDefaultNormalizerSamples);

    /// Fills rate = log2(1 + sinr) per UE and the aggregates (average and sum rate).
    RateReport ergodic_rates(RateReport report);
}

#endif
