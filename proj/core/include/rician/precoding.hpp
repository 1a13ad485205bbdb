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

#ifndef RICIAN_PRECODING_HPP
#define RICIAN_PRECODING_HPP

#include "rician/channel.hpp"
#include "rician/common.hpp"
#include "rician/scenario.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rician
{
    struct PrecoderSet
    {
        Scheme scheme = Scheme::mrt;
        std::vector<cmat> g;           // per cell: N x K, column k = g_jk
        std::vector<double> normalizer; // theta_j (MRT) or psi_j (RZF)
        std::vector<double> lambda;     // RZF only
    };

    /// How the RZF direction (1/N) Q_j hhat_jjk is evaluated.
    ///  - resolvent: Cholesky of the N x N matrix (1/N) Hhat Hhat^H + lambda I, O(N^3 + N^2 K).
    ///  - coresolvent: push-through form (1/N) Hhat ((1/N) Hhat^H Hhat + lambda I_K)^{-1},
    ///    O(N K^2 + K^3). Algebraically identical.
    enum class RzfRoute
    {
        resolvent,
        coresolvent
    };

    /// g_jk = sqrt(theta_j) hhat_jjk.
    PrecoderSet mrt_precoder(const EstimatedChannels &estimates, std::span<const double> theta);

    /// g_jk = sqrt(psi_j) (1/N) Q_j hhat_jjk, Q_j = ((1/N) sum_i hhat_jji hhat_jji^H + lambda_j I)^{-1}.
    PrecoderSet rzf_precoder(const EstimatedChannels &estimates, std::span<const double> lambda,
                             std::span<const double> psi, RzfRoute route = RzfRoute::resolvent);

    /// Q_j formed explicitly (N x N), for diagnostics and tests.
    cmat rzf_resolvent(const cmat &hhat, double lambda);

    /// Unnormalized RZF directions u_jk = (1/N) Q_j hhat_jjk of one cell.
    cmat rzf_directions(const cmat &hhat, double lambda, RzfRoute route);

    /// Unnormalized precoder of one cell (hhat for MRT, u for RZF).
    cmat unnormalized_precoder(const cmat &hhat, Scheme scheme, double lambda, RzfRoute route);

    struct NormalizerEstimate
    {
        std::vector<double> value;      // reciprocal of the sample mean power
        std::vector<double> std_error;  // standard error of value
        std::vector<double> mean_power; // sample mean of (1/K) sum_k ||.||^2
        int n_samples = 0;

        double relative_std_error(int j) const { return std_error[static_cast<std::size_t>(j)] / value[static_cast<std::size_t>(j)]; }
    };

    /// Reciprocal of E[(1/K) sum_k ||hhat_jjk||^2] (MRT) or E[(1/K) sum_k ||u_jk||^2] (RZF),
    /// estimated from n_samples independent estimate draws (see draw_estimates). The streams
    /// are disjoint from the ones the SINR simulation uses.
    NormalizerEstimate estimate_normalizer(const Scenario &scenario, Scheme scheme, int n_samples,
                                           std::uint64_t seed, unsigned workers = 1);

    inline constexpr int kDefaultNormalizerSamples = 10'000;
}

#endif
