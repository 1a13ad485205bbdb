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

namespace rician
{
    ChannelRealization draw_channels(const Scenario &scenario, GaussianSource &rng)
    {
        const int L = scenario.L(), K = scenario.K(), N = scenario.N();
        ChannelRealization out;
        out.L = L;
        out.K = K;
        out.N = N;
        out.stream_seed = rng.seed();
        out.h.assign(static_cast<std::size_t>(L) * L, cmat(N, K));
        for (int j = 0; j < L; ++j)
            for (int l = 0; l < L; ++l)
            {
                cmat &H = out.at(j, l);
                rng.fill(H);
                for (int k = 0; k < K; ++k)
                    H.col(k) *= std::sqrt(scenario.d(j, l, k));
                if (l == j)
                    H += scenario.los_matrix(j);
            }
        return out;
    }

    PilotObservation pilot_observation(const ChannelRealization &realization, const Scenario &scenario, GaussianSource &rng)
    {
        const int L = scenario.L(), K = scenario.K(), N = scenario.N();
        const double noise_scale = 1.0 / std::sqrt(scenario.rho_tr());
        PilotObservation out;
        out.y.assign(static_cast<std::size_t>(L), cmat(N, K));
        cmat noise(N, K);
        for (int j = 0; j < L; ++j)
        {
            cmat &y = out.y[j];
            y = realization.at(j, 0);
            for (int l = 1; l < L; ++l)
                y += realization.at(j, l);
            rng.fill(noise);
            y += noise_scale * noise;
        }
        return out;
    }

    UeTable<double> mmse_coefficients(const Scenario &scenario)
    {
        const int L = scenario.L(), K = scenario.K();
        UeTable<double> c(L, K);
        for (int j = 0; j < L; ++j)
            for (int k = 0; k < K; ++k)
            {
                double denom = 1.0 / scenario.rho_tr();
                for (int n = 0; n < L; ++n)
                    denom += scenario.d(j, n, k);
                c(j, k) = scenario.d(j, j, k) / denom;
            }
        return c;
    }

    EstimatedChannels mmse_estimate(const PilotObservation &pilots, const Scenario &scenario)
    {
        const int L = scenario.L(), K = scenario.K();
        EstimatedChannels out;
        out.coefficient = mmse_coefficients(scenario);
        out.error_var = UeTable<double>(L, K);
        out.hhat.resize(static_cast<std::size_t>(L));
        for (int j = 0; j < L; ++j)
        {
            const cmat &hbar = scenario.los_matrix(j);
            out.hhat[j] = hbar;
            for (int k = 0; k < K; ++k)
            {
                out.hhat[j].col(k) += out.coefficient(j, k) * (pilots.y[j].col(k) - hbar.col(k));
                out.error_var(j, k) = scenario.d(j, j, k) - scenario.phi(j, j, k);
            }
        }
        return out;
    }

    EstimatedChannels draw_estimates(const Scenario &scenario, GaussianSource &rng)
    {
        const int L = scenario.L(), K = scenario.K(), N = scenario.N();
        EstimatedChannels out;
        out.coefficient = mmse_coefficients(scenario);
        out.error_var = UeTable<double>(L, K);
        out.hhat.assign(static_cast<std::size_t>(L), cmat(N, K));
        for (int j = 0; j < L; ++j)
        {
            cmat &hhat = out.hhat[j];
            rng.fill(hhat);
            for (int k = 0; k < K; ++k)
            {
                hhat.col(k) *= std::sqrt(scenario.phi(j, j, k));
                out.error_var(j, k) = scenario.d(j, j, k) - scenario.phi(j, j, k);
            }
            hhat += scenario.los_matrix(j);
        }
        return out;
    }
}
