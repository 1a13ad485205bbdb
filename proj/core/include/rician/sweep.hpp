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

#ifndef RICIAN_SWEEP_HPP
#define RICIAN_SWEEP_HPP

#include "rician/common.hpp"
#include "rician/precoding.hpp"
#include "rician/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rician
{
    enum class SweepVariable
    {
        N,
        kappa
    };

    enum class Engine
    {
        mc,
        de,
        limits
    };

    std::string_view to_string(SweepVariable v);
    std::string_view to_string(Engine e);
    SweepVariable parse_sweep_variable(std::string_view text);
    Engine parse_engine(std::string_view text);

    struct SweepSpec
    {
        SweepVariable variable = SweepVariable::N;
        std::vector<double> values;
        std::vector<Scheme> schemes;
        std::vector<Engine> engines;
        int trials = 0;                    // Monte Carlo trials per point
        std::optional<std::uint64_t> seed; // overrides the config seed
        std::filesystem::path out_path;
        int normalizer_samples = kDefaultNormalizerSamples;
        unsigned workers = 1; // sweep points in flight; 0 = hardware concurrency

        /// Throws config_error: empty or non-ascending values, empty scheme or engine list,
        /// fewer than 2 trials with mc selected, non-integral N values.
        void validate() const;
    };

    inline constexpr std::string_view kSweepCsvHeader =
        "sweep_var,sweep_value,scheme,engine,cell,ue,sinr,rate,stderr,trials,seed";

    /// Runs the sweep and returns the CSV text (header included). Rows are ordered by
    /// (sweep value, scheme, engine, cell, ue); each (value, scheme, engine) block ends with
    /// the aggregate rows cell=all, ue=avg and ue=sum. Deterministic for a fixed seed.
    /// Propagates config_error, instability_error and convergence_error.
    std::string sweep_csv(const ScenarioConfig &config, const SweepSpec &spec);

    /// Loads the config, runs the sweep and writes spec.out_path.
    void run_sweep(const std::filesystem::path &config_path, const SweepSpec &spec);

    struct ValidationReport
    {
        bool ok = false;
        std::string text;
    };

    /// Scenario summary, dimension-ratio and LOS-norm checks, regularization resolution.
    ValidationReport validate_config(const ScenarioConfig &config);
}

#endif
