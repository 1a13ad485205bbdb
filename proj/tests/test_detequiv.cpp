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

#include "rician/detequiv.hpp"
#include "rician/limits.hpp"
#include "rician/montecarlo.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>

using namespace rician;
using Catch::Approx;

namespace
{
    ScenarioConfig reference_config(double kappa = 5.0)
    {
        ScenarioConfig c;
        c.kappa = {kappa};
        return c;
    }

    FixedPointOptions tight()
    {
        FixedPointOptions o;
        o.tol = 1e-13;
        return o;
    }

    double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

    // One cell, K = 2, N = 4: phi = (0.5, 0.2) with rho_tr = 1 and d kappa = 1 on orthogonal directions.
    Scenario tiny_orthogonal()
    {
        ScenarioConfig c;
        c.L = 1;
        c.K = 2;
        c.N = 4;
        c.rho_tr_db = 0.0;
        c.los_model = LosModel::dft_orthogonal;
        const double d1 = 1.0;
        const double d2 = (0.2 + std::sqrt(0.04 + 0.8)) / 2.0; // d^2 / (1 + d) = 0.2
        c.kappa = {1.0 / d1, 1.0 / d2};
        GainTable beta(1, 2);
        beta(0, 0, 0) = d1 + 1.0;
        beta(0, 0, 1) = d2 + 1.0;
        return build_scenario_with_gains(c, beta);
    }
}

TEST_CASE("fixed point without estimate energy", "[detequiv]")
{
    // no own-cell gain at all: Phi = 0 and Hbar = 0
    auto c = reference_config(0.0);
    GainTable beta(3, 10, 0.1);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 10; ++k)
            beta(j, j, k) = 0.0;
    const Scenario s = build_scenario_with_gains(c, beta);
    const auto fp = solve_fixed_point(s, 0, 0.2);
    CHECK(fp.delta_tilde == 0.0);
    CHECK(fp.delta == Approx(1.0 / 0.2).epsilon(1e-8));

    const auto mrt = mrt_det_sinr(s);
    const auto rzf = rzf_det_sinr(s);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 10; ++k)
        {
            CHECK(mrt.gamma(j, k) == 0.0);
            CHECK(rzf.gamma(j, k) == 0.0);
        }
}

TEST_CASE("fixed point satisfies the trace equations", "[detequiv]")
{
    SECTION("tiny orthogonal case, dense substitution")
    {
        const Scenario s = tiny_orthogonal();
        REQUIRE(s.phi(0, 0, 0) == Approx(0.5).epsilon(1e-14));
        REQUIRE(s.phi(0, 0, 1) == Approx(0.2).epsilon(1e-14));
        const double lambda = 0.1;
        const auto fp = solve_fixed_point(s, 0, lambda, tight());
        const auto phi = oracle::own_phi(s, 0);
        const double d22 = oracle::T_of(s.los_matrix(0), phi, lambda, fp.delta, fp.delta_tilde).trace().real() / 4.0;
        const double d23 = (phi.asDiagonal() * oracle::Tt_of(s.los_matrix(0), phi, lambda, fp.delta, fp.delta_tilde)).trace().real() / 4.0;
        CHECK(std::abs(d22 - fp.delta) < 1e-10);
        CHECK(std::abs(d23 - fp.delta_tilde) < 1e-10);
    }
    SECTION("reference layout, every cell")
    {
        const Scenario s = build_scenario(reference_config());
        for (int j = 0; j < 3; ++j)
        {
            const auto fp = solve_fixed_point(s, j, s.lambda(j));
            CHECK(fp.residual < 1e-8);
            CHECK(fixed_point_residual(s, j, s.lambda(j), fp.delta, fp.delta_tilde) < 1e-8);
            CHECK(fp.delta > 0.0);
            CHECK(fp.delta_tilde >= 0.0);
            CHECK(fp.iterations > 0);
        }
    }
}

TEST_CASE("reduced fixed point matches the dense computation", "[detequiv]")
{
    for (LosModel los : {LosModel::ula, LosModel::dft_orthogonal})
    {
        auto c = reference_config(2.0);
        c.N = 48;
        c.K = 6;
        c.los_model = los;
        const Scenario s = build_scenario(c);
        for (int j = 0; j < 3; ++j)
        {
            const double lambda = s.lambda(j);
            const auto fp = solve_fixed_point(s, j, lambda, tight());
            const auto dense = oracle::dense_fixed_point(s.los_matrix(j), oracle::own_phi(s, j), lambda);
            CHECK(rel(fp.delta, dense.delta) < 1e-8);
            CHECK(std::abs(fp.delta_tilde - dense.delta_tilde) < 1e-8 * (1.0 + dense.delta_tilde));
            CHECK((fp.T_tilde - dense.Tt).norm() <= 1e-8 * dense.Tt.norm());
            CHECK((fp.T() - dense.T).norm() <= 1e-8 * dense.T.norm());
            CHECK(rel(fp.theta_aux, dense.theta) < 1e-8);
            CHECK(std::abs(fp.theta_tilde_aux - dense.theta_tilde) < 1e-8 * (1.0 + dense.theta_tilde));
            CHECK(std::abs(fp.F - dense.F) < 1e-8);
            CHECK(std::abs(fp.Delta - dense.Delta) < 1e-8);
        }
    }
}

TEST_CASE("fixed point is independent of the initialization", "[detequiv]")
{
    const Scenario s = build_scenario(reference_config());
    for (int j = 0; j < 3; ++j)
    {
        const double lambda = s.lambda(j);
        std::vector<FixedPointSolution> sols;
        for (double scale : {0.1, 1.0, 10.0})
        {
            FixedPointOptions opt;
            opt.initial_delta = scale / lambda;
            opt.initial_delta_tilde = scale / lambda;
            sols.push_back(solve_fixed_point(s, j, lambda, opt));
        }
        for (const auto &f : sols)
        {
            CHECK(rel(f.delta, sols[1].delta) < 10.0 * FixedPointOptions{}.tol);
            CHECK(std::abs(f.delta_tilde - sols[1].delta_tilde) < 10.0 * FixedPointOptions{}.tol * (1.0 + sols[1].delta_tilde));
        }
    }
}

TEST_CASE("non-convergence is reported, never returned", "[detequiv]")
{
    const Scenario s = build_scenario(reference_config());
    FixedPointOptions opt;
    opt.max_iter = 2;
    CHECK_THROWS_AS(solve_fixed_point(s, 0, s.lambda(0), opt), convergence_error);
    CHECK_THROWS_AS(solve_fixed_point(s, 0, 0.0), std::invalid_argument);
}

TEST_CASE("co-resolvent approximation is diagonal for decoupled inputs", "[detequiv]")
{
    ScenarioConfig c = reference_config(3.0);
    c.N = 64;
    c.K = 8;
    c.los_model = LosModel::dft_orthogonal;
    GainTable beta(3, 8, 0.2);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 8; ++k)
            beta(j, j, k) = 1.0;
    const Scenario s = build_scenario_with_gains(c, beta);
    const auto fp = solve_fixed_point(s, 1, s.lambda(1));
    cmat off = fp.T_tilde;
    off.diagonal().setZero();
    CHECK(off.norm() < 1e-10);
}

TEST_CASE("MRT deterministic equivalent equals the exact finite-N SINR", "[detequiv]")
{
    for (LosModel los : {LosModel::ula, LosModel::dft_orthogonal})
        for (double kappa : {0.0, 0.1, 5.0, 30.0})
        {
            auto c = reference_config(kappa);
            c.los_model = los;
            const Scenario s = build_scenario(c);
            const auto de = mrt_det_sinr(s);
            const auto exact = oracle::exact_mrt_sinr(s);
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 10; ++k)
                    CHECK(rel(de.gamma(j, k), exact[static_cast<std::size_t>(j) * 10 + k]) < 1e-10);
        }
}

TEST_CASE("MRT deterministic equivalent in a single Rayleigh cell", "[detequiv][stats]")
{
    ScenarioConfig c;
    c.L = 1;
    c.K = 8;
    c.N = 256;
    c.kappa = {0.0};
    c.rho_dl_db = 60.0;
    const Scenario s = build_scenario_with_gains(c, GainTable(1, 8, 1.0));
    const auto de = mrt_det_sinr(s);
    // Rayleigh, equal gains, no contamination: gamma = N phi / (K d + 1/rho_dl ...) in the exact form
    const double phi = s.phi(0, 0, 0);
    const double expected = phi / (8.0 / 256.0 * 1.0 + 1.0 / (256.0 * s.rho_dl()));
    CHECK(rel(de.gamma(0, 0), expected) < 1e-12);

    MonteCarloOptions opt;
    opt.trials = 2000;
    const auto mc = run_montecarlo(s, Scheme::mrt, opt).report;
    for (int k = 0; k < 8; ++k)
        CHECK(rel(mc.at(0, k).sinr, de.gamma(0, k)) < 0.03);
}

TEST_CASE("RZF deterministic equivalent matches the dense evaluation", "[detequiv]")
{
    for (double kappa : {0.1, 5.0})
    {
        auto c = reference_config(kappa);
        c.N = 40;
        c.K = 6;
        const Scenario s = build_scenario(c);
        const auto de = rzf_det_sinr(s, tight());
        const auto dense = oracle::dense_rzf_sinr(s);
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 6; ++k)
                CHECK(rel(de.gamma(j, k), dense[static_cast<std::size_t>(j) * 6 + k]) < 1e-8);
    }
}

TEST_CASE("heavy regularization makes RZF equivalent to MRT", "[detequiv]")
{
    auto c = reference_config();
    c.lambda = LambdaRule::fixed(1e5);
    const Scenario s = build_scenario(c);
    const auto mrt = mrt_det_sinr(s);
    const auto rzf = rzf_det_sinr(s);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 10; ++k)
            CHECK(rel(rzf.gamma(j, k), mrt.gamma(j, k)) < 2e-3);
}

TEST_CASE("injecting the small-load fixed point reproduces the large-array limit terms", "[detequiv][limits]")
{
    const Scenario s = build_scenario(reference_config());
    std::vector<FixedPointSolution> injected;
    for (int l = 0; l < 3; ++l)
    {
        const double lam = s.lambda(l);
        FixedPointSolution f;
        f.cell = l;
        f.lambda = lam;
        f.delta = 1.0 / lam;
        f.delta_tilde = 0.0;
        f.theta_aux = 1.0 / (lam * lam);
        f.theta_tilde_aux = 0.0;
        f.F = 0.0;
        f.Delta = 1.0;
        f.los = s.los_matrix(l);
        f.phi = oracle::own_phi(s, l);
        cmat A = s.los_gram(l);
        A.diagonal().array() += lam + f.phi.array();
        f.T_tilde = oracle::dense_inverse(A);
        injected.push_back(f);
    }
    const auto thm = rzf_det_sinr(s, injected);
    const auto lim = rzf_limit_sinr(s);
    for (int l = 0; l < 3; ++l)
    {
        CHECK(rel(thm.normalizer[l], lim.normalizer[l]) < 1e-12);
        CHECK(rel(thm.nu_bar[l], lim.nu_bar[l]) < 1e-12);
    }
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 10; ++k)
        {
            CHECK(std::abs(thm.varsigma(j, k) - lim.varsigma(j, k)) <= 1e-10 * (1.0 + std::abs(lim.varsigma(j, k))));
            CHECK(rel(thm.numerator(j, k), lim.numerator(j, k)) < 1e-12);
            CHECK(std::abs(thm.s_bar(j, k) - lim.s_bar(j, k)) <= 1e-9 * lim.numerator(j, k));
            CHECK(rel(thm.contamination(j, k), lim.contamination(j, k)) < 1e-12);
            for (int l = 0; l < 3; ++l)
            {
                CHECK(std::abs(thm.xi(l, j, k) - lim.xi(l, j, k)) <= 1e-10 * (1.0 + std::abs(lim.xi(l, j, k))));
                CHECK(std::abs(thm.mu(l, j, k) - lim.mu(l, j, k)) <= 1e-10 * (1.0 + std::abs(lim.mu(l, j, k))));
            }
        }
}

TEST_CASE("RZF equivalent rejects a degenerate fixed point", "[detequiv]")
{
    const Scenario s = build_scenario(reference_config());
    auto fps = solve_all_fixed_points(s);
    fps[1].Delta = -0.5;
    CHECK_THROWS_AS(rzf_det_sinr(s, fps), convergence_error);
    fps.pop_back();
    CHECK_THROWS_AS(rzf_det_sinr(s, fps), std::invalid_argument);
}

TEST_CASE("equivalents are permutation equivariant in the UE labels", "[detequiv]")
{
    const Scenario base = build_scenario(reference_config());
    ScenarioConfig c = reference_config();
    c.geometry = Geometry::explicit_positions;
    c.bs_positions = base.bs_positions();
    const std::vector<int> perm{3, 0, 7, 1, 9, 2, 8, 4, 6, 5};
    for (int l = 0; l < 3; ++l)
        for (int k = 0; k < 10; ++k)
            c.ue_positions.push_back(base.ue_position(l, perm[static_cast<std::size_t>(k)]));
    const Scenario permuted = build_scenario(c);
    const auto m0 = mrt_det_sinr(base), m1 = mrt_det_sinr(permuted);
    const auto r0 = rzf_det_sinr(base), r1 = rzf_det_sinr(permuted);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 10; ++k)
        {
            const int src = perm[static_cast<std::size_t>(k)];
            CHECK(rel(m1.gamma(j, k), m0.gamma(j, src)) < 1e-10);
            CHECK(rel(r1.gamma(j, k), r0.gamma(j, src)) < 1e-8);
        }
}

TEST_CASE("equivalents are finite and nonnegative across a corpus", "[detequiv]")
{
    for (std::uint64_t seed : {1u, 2u, 3u, 4u})
        for (double kappa : {0.0, 0.1, 1.0, 30.0, 1000.0})
            for (int N : {20, 100, 400})
                for (LosModel los : {LosModel::ula, LosModel::dft_orthogonal})
                {
                    auto c = reference_config(kappa);
                    c.seed = seed;
                    c.N = N;
                    c.los_model = los;
                    const Scenario s = build_scenario(c);
                    const auto m = mrt_det_sinr(s);
                    const auto r = rzf_det_sinr(s);
                    for (int j = 0; j < 3; ++j)
                        for (int k = 0; k < 10; ++k)
                        {
                            CHECK(std::isfinite(m.gamma(j, k)));
                            CHECK(m.gamma(j, k) >= 0.0);
                            CHECK(std::isfinite(r.gamma(j, k)));
                            CHECK(r.gamma(j, k) >= 0.0);
                        }
                }
}

TEST_CASE("rate reports carry provenance", "[detequiv]")
{
    const Scenario s = build_scenario(reference_config());
    const auto r = to_rate_report(rzf_det_sinr(s));
    CHECK(r.provenance == Provenance::de);
    CHECK(r.scheme == Scheme::rzf);
    REQUIRE(r.ues.size() == 30);
    CHECK(r.ues[13].cell == 1);
    CHECK(r.ues[13].ue == 3);
    CHECK(r.ues[13].rate == Approx(std::log2(1.0 + r.ues[13].sinr)));
    CHECK(std::isnan(r.ues[13].sinr_se));
}
