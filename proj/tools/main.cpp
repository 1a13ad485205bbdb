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

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

namespace
{
    enum ExitCode
    {
        exit_ok = 0,
        exit_usage = 2,
        exit_instability = 3,
        exit_nonconvergence = 4
    };

    std::vector<double> parse_values(const std::string &text)
    {
        std::vector<double> out;
        std::stringstream ss(text);
        for (std::string item; std::getline(ss, item, ',');)
        {
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(item, &used);
            }
            catch (const std::exception &)
            {
                throw rician::config_error("--values: '" + item + "' is not a number");
            }
            if (item.find_first_not_of(" \t", used) != std::string::npos)
                throw rician::config_error("--values: '" + item + "' is not a number");
            out.push_back(v);
        }
        return out;
    }

    std::vector<rician::Scheme> parse_schemes(const std::string &text)
    {
        if (text == "both")
            return {rician::Scheme::mrt, rician::Scheme::rzf};
        if (text.empty())
            return {};
        return {rician::parse_scheme(text)};
    }

    std::vector<rician::Engine> parse_engines(const std::string &text)
    {
        if (text == "all")
            return {rician::Engine::mc, rician::Engine::de, rician::Engine::limits};
        if (text.empty())
            return {};
        return {rician::parse_engine(text)};
    }

    // Command line in CLI11's reversed order, with "--opt=" expanded to an explicit empty value.
    std::vector<std::string> reversed_args(int argc, char **argv)
    {
        std::vector<std::string> out;
        for (int i = argc - 1; i >= 1; --i)
        {
            std::string arg = argv[i];
            if (arg.size() > 3 && arg.starts_with("--") && arg.back() == '=')
            {
                out.emplace_back();
                arg.pop_back();
            }
            out.push_back(std::move(arg));
        }
        return out;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Downlink multicell massive MIMO over Rician fading: Monte Carlo and deterministic equivalents"};
    app.require_subcommand(1);

    std::string config_path;
    auto *validate = app.add_subcommand("validate", "Check a scenario file and print a summary");
    validate->add_option("--config", config_path, "Scenario file")->required();

    std::string variable, values, scheme, engine, out_path;
    int trials = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    auto *sweep = app.add_subcommand("sweep", "Sweep N or kappa and write per-UE rates as CSV");
    sweep->add_option("--config", config_path, "Scenario file")->required();
    sweep->add_option("--sweep", variable, "Swept parameter: N or kappa")->required();
    sweep->add_option("--values", values, "Comma-separated ascending values")->required();
    sweep->add_option("--scheme", scheme, "mrt, rzf or both")->required();
    sweep->add_option("--engine", engine, "mc, de, limits or all")->required();
    sweep->add_option("--trials", trials, "Monte Carlo trials per point (required with mc)");
    auto *seed_opt = sweep->add_option("--seed", seed, "Random seed (default: the config seed)");
    sweep->add_option("--out", out_path, "Output CSV path")->required();
    sweep->add_option("--workers", workers, "Sweep points evaluated concurrently (0 = all cores)")->capture_default_str();

    try
    {
        auto args = reversed_args(argc, argv);
        app.parse(args);
    }
    catch (const CLI::Success &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_usage;
    }

    try
    {
        if (*validate)
        {
            const auto config = rician::load_scenario_config(config_path, false);
            const auto report = rician::validate_config(config);
            std::fputs(report.text.c_str(), stdout);
            return report.ok ? exit_ok : exit_usage;
        }

        rician::SweepSpec spec;
        spec.variable = rician::parse_sweep_variable(variable);
        spec.values = parse_values(values);
        spec.schemes = parse_schemes(scheme);
        spec.engines = parse_engines(engine);
        spec.trials = trials;
        if (*seed_opt)
            spec.seed = seed;
        spec.out_path = out_path;
        spec.workers = workers;
        rician::run_sweep(config_path, spec);
        return exit_ok;
    }
    catch (const rician::config_error &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const rician::instability_error &e)
    {
        std::cerr << "Monte Carlo instability: " << e.what() << '\n' << e.diagnostics() << '\n';
        return exit_instability;
    }
    catch (const rician::convergence_error &e)
    {
        std::cerr << "fixed point did not converge: " << e.what() << " (residual " << e.residual() << " after "
                  << e.iterations() << " iterations)\n";
        return exit_nonconvergence;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
