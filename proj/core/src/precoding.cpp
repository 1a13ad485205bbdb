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

#include "rician/precoding.hpp"
#include "rician/parallel.hpp"
#include "rician/random.hpp"

#include <string>

namespace rician
{
    namespace
    {
        void check_positive(std::span<const double> v, std::size_t L, const char *what)
        {
            if (v.size() != L)
                throw std::invalid_argument(std::string(what) + ": expected one value per cell");
            for (double x : v)
                if (!(x > 0.0) || !std::isfinite(x))
                    throw std::invalid_argument(std::string(what) + " must be positive");
        }
    }

    PrecoderSet mrt_precoder(const EstimatedChannels &estimates, std::span<const double> theta)
    {
        const auto L = estimates.hhat.size();
        check_positive(theta, L, "theta");
        PrecoderSet out;
        out.scheme = Scheme::mrt;
        out.normalizer.assign(theta.begin(), theta.end());
        out.g.reserve(L);
        for (std::size_t j = 0; j < L; ++j)
            out.g.push_back(std::sqrt(theta[j]) * estimates.hhat[j]);
        return out;
    }

    cmat rzf_resolvent(const cmat &hhat, double lambda)
    {
        const auto N = hhat.rows();
        cmat A = hhat * hhat.adjoint() / static_cast<double>(N);
        A.diagonal().array() += lambda;
        Eigen::LLT<cmat> llt(A);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("rzf_resolvent: factorization failed");
        return llt.solve(cmat::Identity(N, N));
    }

    cmat rzf_directions(const cmat &hhat, double lambda, RzfRoute route)
    {
        if (!(lambda > 0.0))
            throw std::invalid_argument("lambda must be positive");
        const auto N = hhat.rows();
        const double inv_n = 1.0 / static_cast<double>(N);
        if (route == RzfRoute::resolvent)
        {
            cmat A = inv_n * (hhat * hhat.adjoint());
            A.diagonal().array() += lambda;
            Eigen::LLT<cmat> llt(A);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error("rzf_directions: factorization failed");
            return inv_n * llt.solve(hhat);
        }
        cmat B = inv_n * (hhat.adjoint() * hhat);
        B.diagonal().array() += lambda;
        Eigen::LLT<cmat> llt(B);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("rzf_directions: factorization failed");
        // (1/N) Hhat B^{-1}: solve B X = Hhat^H, then take the adjoint (B is Hermitian)
        return inv_n * llt.solve(hhat.adjoint()).adjoint();
    }

    cmat unnormalized_precoder(const cmat &hhat, Scheme scheme, double lambda, RzfRoute route)
    {
        return scheme == Scheme::mrt ? hhat : rzf_directions(hhat, lambda, route);
    }

    PrecoderSet rzf_precoder(const EstimatedChannels &estimates, std::span<const double> lambda,
                             std::span<const double> psi, RzfRoute route)
    {
        const auto L = estimates.hhat.size();
        check_positive(lambda, L, "lambda");
        check_positive(psi, L, "psi");
        PrecoderSet out;
        out.scheme = Scheme::rzf;
        out.normalizer.assign(psi.begin(), psi.end());
        out.lambda.assign(lambda.begin(), lambda.end());
        out.g.reserve(L);
        for (std::size_t j = 0; j < L; ++j)
            out.g.push_back(std::sqrt(psi[j]) * rzf_directions(estimates.hhat[j], lambda[j], route));
        return out;
    }

    NormalizerEstimate estimate_normalizer(const Scenario &scenario, Scheme scheme, int n_samples,
                                           std::uint64_t seed, unsigned workers)
    {
        if (n_samples < 1)
            throw std::invalid_argument("estimate_normalizer: n_samples must be at least 1");
        const int L = scenario.L(), K = scenario.K();

        // per-sample, per-cell power; accumulated afterwards in sample order
        std::vector<double> power(static_cast<std::size_t>(n_samples) * L);
        parallel_for(static_cast<std::size_t>(n_samples), workers, [&](std::size_t s)
        {
            GaussianSource rng(stream_seed(seed, StreamTag::normalizer, s));
            const auto est = draw_estimates(scenario, rng);
            for (int j = 0; j < L; ++j)
            {
                const cmat g = unnormalized_precoder(est.hhat[j], scheme, scenario.lambda(j), RzfRoute::coresolvent);
                power[s * L + j] = g.squaredNorm() / K;
            } });

        NormalizerEstimate out;
        out.n_samples = n_samples;
        for (int j = 0; j < L; ++j)
        {
            CompensatedSum sum, sum_sq;
            for (int s = 0; s < n_samples; ++s)
            {
                const double p = power[static_cast<std::size_t>(s) * L + j];
                sum.add(p);
                sum_sq.add(p * p);
            }
            const double n = n_samples;
            const double mean = sum.value() / n;
            if (!(mean > 0.0))
                throw std::runtime_error("estimate_normalizer: zero mean precoder power in cell " + std::to_string(j));
            const double var = n > 1 ? std::max(0.0, (sum_sq.value() - n * mean * mean) / (n - 1.0)) : 0.0;
            const double se_mean = std::sqrt(var / n);
            out.mean_power.push_back(mean);
            out.value.push_back(1.0 / mean);
            out.std_error.push_back(se_mean / (mean * mean));
        }
        return out;
    }
}
