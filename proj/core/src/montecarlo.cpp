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

#include "rician/montecarlo.hpp"
#include "rician/channel.hpp"
#include "rician/parallel.hpp"
#include "rician/random.hpp"

#include <numbers>
#include <sstream>

namespace rician
{
    std::string_view to_string(Provenance p)
    {
        switch (p)
        {
        case Provenance::mc:
            return "mc";
        case Provenance::de:
            return "de";
        case Provenance::limit:
            return "limits";
        }
        return "?";
    }

    namespace
    {
        // Per-trial observations of one UE.
        struct Sample
        {
            cdouble signal; // h_jjk^H g_jk
            double power;   // sum_{l,i} |h_ljk^H g_li|^2
        };

        // Linearized SINR: d gamma / d(Re S, Im S, P) at the point estimate.
        struct Gradient
        {
            double re = 0.0, im = 0.0, p = 0.0;
        };
    }

    RateReport sinr_montecarlo(const Scenario &scenario, Scheme scheme, std::span<const double> normalizer,
                               const MonteCarloOptions &options)
    {
        const int L = scenario.L(), K = scenario.K();
        const int n = options.trials;
        if (n < 2)
            throw std::invalid_argument("sinr_montecarlo: at least 2 trials are required");
        if (normalizer.size() != static_cast<std::size_t>(L))
            throw std::invalid_argument("sinr_montecarlo: one normalizer per cell is required");
        for (double v : normalizer)
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument("sinr_montecarlo: normalizers must be positive");

        const std::size_t n_ue = static_cast<std::size_t>(L) * K;
        std::vector<Sample> samples(static_cast<std::size_t>(n) * n_ue);

        parallel_for(static_cast<std::size_t>(n), options.workers, [&](std::size_t t)
        {
            GaussianSource rng(stream_seed(options.seed, StreamTag::montecarlo, t));
            const auto h = draw_channels(scenario, rng);
            const auto est = mmse_estimate(pilot_observation(h, scenario, rng), scenario);
            std::vector<cmat> g(static_cast<std::size_t>(L));
            for (int l = 0; l < L; ++l)
                g[l] = std::sqrt(normalizer[l]) * unnormalized_precoder(est.hhat[l], scheme, scenario.lambda(l), options.route);

            Sample *out = &samples[t * n_ue];
            for (std::size_t u = 0; u < n_ue; ++u)
                out[u] = {cdouble{}, 0.0};
            for (int l = 0; l < L; ++l)
                for (int j = 0; j < L; ++j)
                {
                    // M(k, i) = h_ljk^H g_li
                    const cmat M = h.at(l, j).adjoint() * g[l];
                    for (int k = 0; k < K; ++k)
                    {
                        Sample &s = out[static_cast<std::size_t>(j) * K + k];
                        s.power += M.row(k).squaredNorm();
                        if (l == j)
                            s.signal = M(k, k);
                    }
                } });

        int batch = options.batch_size;
        if (batch < 1 || n / batch < 2)
            batch = 1;
        const int n_batches = n / batch;

        RateReport report;
        report.provenance = Provenance::mc;
        report.scheme = scheme;
        report.L = L;
        report.K = K;
        report.n_trials = n;
        report.ues.resize(n_ue);

        const double noise = 1.0 / scenario.rho_dl();
        std::vector<Gradient> grad(n_ue);
        // batch means, [u][b]
        std::vector<Sample> batch_mean(n_ue * static_cast<std::size_t>(n_batches));
        std::vector<Sample> mean(n_ue);

        for (std::size_t u = 0; u < n_ue; ++u)
        {
            CompensatedSum sr, si, sp;
            for (int t = 0; t < n; ++t)
            {
                const Sample &s = samples[static_cast<std::size_t>(t) * n_ue + u];
                sr.add(s.signal.real());
                si.add(s.signal.imag());
                sp.add(s.power);
            }
            const cdouble S{sr.value() / n, si.value() / n};
            const double P = sp.value() / n;
            mean[u] = {S, P};

            CompensatedSum var;
            for (int t = 0; t < n; ++t)
                var.add(std::norm(samples[static_cast<std::size_t>(t) * n_ue + u].signal - S));
            const double signal_var = var.value() / (n - 1);

            // |mean|^2 overestimates |E|^2 by Var/n
            const double X = std::max(0.0, std::norm(S) - signal_var / n);
            const double denom = noise + P - X;
            auto &ue = report.ues[u];
            ue.cell = static_cast<int>(u) / K;
            ue.ue = static_cast<int>(u) % K;
            if (!(denom > 0.0))
            {
                std::ostringstream diag;
                diag.precision(10);
                diag << "cell " << ue.cell << " ue " << ue.ue << ": signal " << X << ", total power " << P
                     << ", noise " << noise << ", denominator " << denom << " after " << n << " trials";
                throw instability_error("Monte Carlo SINR denominator is not positive", diag.str());
            }
            ue.signal_power = X;
            ue.interference_power = P - X;
            ue.sinr = X / denom;

            const double dg_dx = (noise + P) / (denom * denom);
            const double dg_dp = -X / (denom * denom);
            grad[u] = {dg_dx * 2.0 * S.real(), dg_dx * 2.0 * S.imag(), dg_dp};

            for (int b = 0; b < n_batches; ++b)
            {
                CompensatedSum br, bi, bp;
                for (int t = b * batch; t < (b + 1) * batch; ++t)
                {
                    const Sample &s = samples[static_cast<std::size_t>(t) * n_ue + u];
                    br.add(s.signal.real());
                    bi.add(s.signal.imag());
                    bp.add(s.power);
                }
                batch_mean[u * n_batches + b] = {cdouble{br.value() / batch, bi.value() / batch}, bp.value() / batch};
            }
        }

        // standard error of a linear functional of the batch means
        auto batch_se = [&](auto &&weight)
        {
            std::vector<double> lin(static_cast<std::size_t>(n_batches), 0.0);
            for (std::size_t u = 0; u < n_ue; ++u)
            {
                const Gradient w = weight(u);
                if (w.re == 0.0 && w.im == 0.0 && w.p == 0.0)
                    continue;
                for (int b = 0; b < n_batches; ++b)
                {
                    const Sample &s = batch_mean[u * n_batches + b];
                    lin[b] += w.re * (s.signal.real() - mean[u].signal.real()) +
                              w.im * (s.signal.imag() - mean[u].signal.imag()) +
                              w.p * (s.power - mean[u].power);
                }
            }
            CompensatedSum acc, acc_sq;
            for (double v : lin)
            {
                acc.add(v);
                acc_sq.add(v * v);
            }
            const double m = acc.value() / n_batches;
            const double var = std::max(0.0, (acc_sq.value() - n_batches * m * m) / (n_batches - 1));
            return std::sqrt(var / n_batches);
        };

        const double ln2 = std::numbers::ln2;
        for (std::size_t u = 0; u < n_ue; ++u)
        {
            auto &ue = report.ues[u];
            const cdouble S = mean[u].signal;
            auto only = [u](Gradient g)
            { return [u, g](std::size_t v)
              { return v == u ? g : Gradient{}; }; };
            ue.sinr_se = batch_se(only(grad[u]));
            ue.signal_se = batch_se(only({2.0 * S.real(), 2.0 * S.imag(), 0.0}));
            ue.interference_se = batch_se(only({-2.0 * S.real(), -2.0 * S.imag(), 1.0}));
            ue.rate_se = ue.sinr_se / ((1.0 + ue.sinr) * ln2);
        }
        report = ergodic_rates(std::move(report));

        const double inv_count = 1.0 / static_cast<double>(n_ue);
        report.average_rate_se = batch_se([&](std::size_t u)
        {
            const double w = inv_count / ((1.0 + report.ues[u].sinr) * ln2);
            return Gradient{w * grad[u].re, w * grad[u].im, w * grad[u].p}; });
        return report;
    }

    MonteCarloRun run_montecarlo(const Scenario &scenario, Scheme scheme, const MonteCarloOptions &options,
                                 int normalizer_samples)
    {
        MonteCarloRun run;
        run.normalizer = estimate_normalizer(scenario, scheme, normalizer_samples, options.seed, options.workers);
        run.report = sinr_montecarlo(scenario, scheme, run.normalizer.value, options);
        return run;
    }

    RateReport ergodic_rates(RateReport report)
    {
        CompensatedSum total;
        bool any_unbounded = false;
        for (auto &ue : report.ues)
        {
            if (ue.unbounded)
            {
                ue.sinr = std::numeric_limits<double>::infinity();
                ue.rate = std::numeric_limits<double>::infinity();
                any_unbounded = true;
                continue;
            }
            ue.rate = std::log2(1.0 + ue.sinr);
            total.add(ue.rate);
        }
        if (any_unbounded)
        {
            report.sum_rate = std::numeric_limits<double>::infinity();
            report.average_rate = std::numeric_limits<double>::infinity();
        }
        else
        {
            report.sum_rate = total.value();
            report.average_rate = report.ues.empty() ? 0.0 : report.sum_rate / static_cast<double>(report.ues.size());
        }
        return report;
    }
}
