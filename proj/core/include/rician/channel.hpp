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

#ifndef RICIAN_CHANNEL_HPP
#define RICIAN_CHANNEL_HPP

#include "rician/common.hpp"
#include "rician/random.hpp"
#include "rician/scenario.hpp"

#include <cstdint>
#include <vector>

namespace rician
{
    /// One draw of every channel vector h_jlk. Matrix (j, l) is N x K with column k = h_jlk.
    struct ChannelRealization
    {
        int L = 0;
        int K = 0;
        int N = 0;
        std::uint64_t stream_seed = 0; // seed of the generator that produced the draw
        std::vector<cmat> h;

        const cmat &at(int j, int l) const { return h[static_cast<std::size_t>(j) * L + l]; }
        cmat &at(int j, int l) { return h[static_cast<std::size_t>(j) * L + l]; }
        cvec vec(int j, int l, int k) const { return at(j, l).col(k); }
    };

    /// Uplink training observations: per cell j an N x K matrix with column k = y_jk.
    struct PilotObservation
    {
        std::vector<cmat> y;
    };

    /// Single-cell MMSE estimates of the own-cell channels.
    struct EstimatedChannels
    {
        std::vector<cmat> hhat;      // per cell j: N x K, column k = hhat_jjk
        UeTable<double> error_var;   // d_jjk - phi_jjk
        UeTable<double> coefficient; // d_jjk / (1/rho_tr + sum_n d_jnk)

        int L() const { return static_cast<int>(hhat.size()); }
        int K() const { return hhat.empty() ? 0 : static_cast<int>(hhat.front().cols()); }
        int N() const { return hhat.empty() ? 0 : static_cast<int>(hhat.front().rows()); }
    };

    /// h_jjk = sqrt(d_jjk) z + hbar_jjk, h_jlk = sqrt(d_jlk) z for l != j. Draw order: j, l, then
    /// column-major within each N x K block.
    ChannelRealization draw_channels(const Scenario &scenario, GaussianSource &rng);

    /// y_jk = sum_l h_jlk + n_jk / sqrt(rho_tr); UE k reuses the same pilot in every cell.
    PilotObservation pilot_observation(const ChannelRealization &realization, const Scenario &scenario, GaussianSource &rng);

    /// hhat_jjk = hbar_jjk + c_jk (y_jk - hbar_jjk), c_jk = d_jjk / (1/rho_tr + sum_n d_jnk).
    EstimatedChannels mmse_estimate(const PilotObservation &pilots, const Scenario &scenario);

    /// Draws the own-cell estimates directly from their law, hhat_jjk = hbar_jjk + sqrt(phi_jjk) z,
    /// without materializing channels or pilots. Same distribution as
    /// mmse_estimate(pilot_observation(draw_channels(...))) but a different use of the stream.
    EstimatedChannels draw_estimates(const Scenario &scenario, GaussianSource &rng);

    /// Per-(j,k) estimator coefficients c_jk.
    UeTable<double> mmse_coefficients(const Scenario &scenario);
}

#endif
