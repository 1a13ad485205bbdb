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

#include "rician/sweep.hpp"

#include "rician/detequiv.hpp"
#include "rician/limits.hpp"
#include "rician/montecarlo.hpp"
#include "rician/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace rician
{
    std::string_view to_string(SweepVariable v) { return v == SweepVariable::N ? "N" : "kappa"; }

    std::string_view to_string(Engine e)
    {
        switch (e)
        {
        case Engine::mc:
            return "mc";
        case Engine::de:
            return "de";
        case Engine::limits:
            return "limits";
        }
        return "?";
    }

    SweepVariable parse_sweep_variable(std::string_view text)
    {
        if (text == "N")
            return SweepVariable::N;
        if (text == "kappa")
            return SweepVariable::kappa;
        throw config_error("unknown sweep variable '" + std::string(text) + "' (expected N or kappa)");
    }

    Engine parse_engine(std::string_view text)
    {
        if (text == "mc")
            return Engine::mc;
        if (text == "de")
            return Engine::de;
        if (text == "limits")
            return Engine::limits;
        throw config_error("unknown engine '" + std::string(text) + "' (expected mc, de or limits)");
    }

    void SweepSpec::validate() const
    {
        if (values.empty())
            throw config_error("sweep needs at least one value");
        for (std::size_t i = 0; i < values.size(); ++i)
        {
            if (!std::isfinite(values[i]))
                throw config_error("sweep values must be finite");
            if (i > 0 && !(values[i] > values[i - 1]))
                throw config_error("sweep values must be strictly ascending");
            if (variable == SweepVariable::N && (values[i] != std::floor(values[i]) || values[i] < 1.0 || values[i] > 1e9))
                throw config_error("N sweep values must be positive integers");
        }
        if (schemes.empty())
            throw config_error("scheme list is empty");
        if (engines.empty())
            throw config_error("engine list is empty");
        if (std::find(engines.begin(), engines.end(), Engine::mc) != engines.end())
        {
            if (trials < 2)
                throw config_error("Monte Carlo needs at least 2 trials");
            if (normalizer_samples < 2)
                throw config_error("normalizer estimation needs at least 2 samples");
        }
    }

    namespace
    {
        template <typename T>
        std::vector<T> canonical(std::vector<T> v)
        {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            return v;
        }

        std::string number(double x) { return fmt::format("{}", x); }

        RateReport evaluate(const Scenario &s, Scheme scheme, Engine engine, const SweepSpec &spec, std::uint64_t seed)
        {
            switch (engine)
            {
            case Engine::mc:
            {
                MonteCarloOptions opt;
                opt.trials = spec.trials;
                opt.seed = seed;
                return run_montecarlo(s, scheme, opt, spec.normalizer_samples).report;
            }
            case Engine::de:
                return to_rate_report(scheme == Scheme::mrt ? mrt_det_sinr(s) : rzf_det_sinr(s));
            case Engine::limits:
                return to_rate_report(scheme == Scheme::mrt ? mrt_limit_sinr(s) : rzf_limit_sinr(s));
            }
            throw std::logic_error("unreachable");
        }

        void append_rows(std::string &out, const SweepSpec &spec, double value, Scheme scheme, Engine engine,
                         const RateReport &r, std::uint64_t seed)
        {
            const bool mc = engine == Engine::mc;
            const std::string prefix = fmt::format("{},{},{},{},", to_string(spec.variable), number(value),
                                                   to_string(scheme), to_string(engine));
            const std::string tail = fmt::format(",{},{}\n", mc ? std::to_string(r.n_trials) : "", seed);
            for (const auto &u : r.ues)
                out += prefix + fmt::format("{},{},{},{},{}", u.cell, u.ue, number(u.sinr), number(u.rate),
                                            mc ? number(u.rate_se) : "") +
                       tail;
            const double n_ue = static_cast<double>(r.ues.size());
            out += prefix + fmt::format("all,avg,,{},{}", number(r.average_rate), mc ? number(r.average_rate_se) : "") + tail;
            out += prefix + fmt::format("all,sum,,{},{}", number(r.sum_rate), mc ? number(n_ue * r.average_rate_se) : "") + tail;
        }
    }

    std::string sweep_csv(const ScenarioConfig &config, const SweepSpec &spec)
    {
        spec.validate();
        const auto schemes = canonical(spec.schemes);
        const auto engines = canonical(spec.engines);
        const std::uint64_t seed = spec.seed.value_or(config.seed);

        // build every scenario up front so configuration errors surface before any work
        std::vector<Scenario> scenarios;
        for (double v : spec.values)
        {
            ScenarioConfig c = config;
            c.seed = seed;
            if (spec.variable == SweepVariable::N)
                c.N = static_cast<int>(v);
            else
                c.kappa = {v};
            scenarios.push_back(build_scenario(c));
        }

        std::vector<std::string> blocks(spec.values.size());
        parallel_for(spec.values.size(), spec.workers, [&](std::size_t p)
                     {
                         for (Scheme scheme : schemes)
                             for (Engine engine : engines)
                                 append_rows(blocks[p], spec, spec.values[p], scheme, engine,
                                             evaluate(scenarios[p], scheme, engine, spec, seed), seed); });

        std::string csv(kSweepCsvHeader);
        csv += '\n';
        for (const auto &b : blocks)
            csv += b;
        return csv;
    }

    void run_sweep(const std::filesystem::path &config_path, const SweepSpec &spec)
    {
        const ScenarioConfig config = load_scenario_config(config_path);
        const std::string csv = sweep_csv(config, spec);
        std::ofstream out(spec.out_path, std::ios::binary);
        if (!out)
            throw config_error("cannot open output file '" + spec.out_path.string() + "'");
        out << csv;
        if (!out)
            throw std::runtime_error("failed writing '" + spec.out_path.string() + "'");
    }

    ValidationReport validate_config(const ScenarioConfig &c)
    {
        ValidationReport rep;
        std::string &t = rep.text;
        t += fmt::format("scenario: L={} K={} N={} pathloss_exponent={} rho_tr={} dB rho_dl={} dB\n", c.L, c.K, c.N,
                         number(c.pathloss_exponent), number(c.rho_tr_db), number(c.rho_dl_db));
        t += fmt::format("los_model={} geometry={} min_distance={} seed={}\n", to_string(c.los_model),
                         to_string(c.geometry), number(c.min_distance), c.seed);
        if (c.kappa.size() == 1)
            t += fmt::format("kappa={} (all UEs)\n", number(c.kappa.front()));
        else
            t += fmt::format("kappa: {} per-UE values\n", c.kappa.size());

        const double ratio = static_cast<double>(c.K) / c.N;
        const bool dims_ok = c.K >= 1 && c.N >= 1 && c.K < c.N;
        t += fmt::format("dimension ratio K/N = {}: {}\n", number(ratio),
                         dims_ok ? "ok (< 1)" : "VIOLATION (K/N must be below 1)");

        try
        {
            c.validate();
        }
        catch (const config_error &e)
        {
            t += fmt::format("invalid: {}\nINVALID\n", e.what());
            return rep;
        }

        const double rho_dl = db_to_linear(c.rho_dl_db);
        const double lambda = c.lambda.resolve(c.K, c.N, rho_dl);
        if (c.lambda.k_over_n_rho)
            t += fmt::format("lambda rule k_over_n_rho: lambda = K/(N rho_dl) = {}/({}*{}) = {}\n", c.K, c.N,
                             number(rho_dl), number(lambda));
        else
            t += fmt::format("lambda fixed: {}\n", number(lambda));

        const Scenario s = build_scenario(c);
        bool los_ok = true;
        for (int j = 0; j < s.L(); ++j)
        {
            double bound = 0.0;
            for (int k = 0; k < s.K(); ++k)
                bound = std::max(bound, s.d(j, j, k) * s.kappa(j, k));
            // Frobenius bound in general, the per-column norm itself for orthogonal directions
            const double cap = std::sqrt(bound * (c.los_model == LosModel::dft_orthogonal ? 1.0 : s.K()));
            const double norm = s.los_spectral_norm(j);
            const bool ok = std::isfinite(norm) && norm <= cap * (1.0 + 1e-12) + 1e-300;
            los_ok = los_ok && ok;
            t += fmt::format("cell {}: LOS norm (1/sqrt(N))||Hbar|| = {} (bound {}): {}\n", j, number(norm), number(cap),
                             ok ? "ok" : "VIOLATION");
        }
        rep.ok = dims_ok && los_ok;
        t += rep.ok ? "OK\n" : "INVALID\n";
        return rep;
    }
}
