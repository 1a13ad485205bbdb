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
#include "rician/random.hpp"

#include "stats.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

using namespace rician;
using Catch::Approx;

namespace
{
    Scenario reference_scenario(double kappa = 5.0)
    {
        ScenarioConfig c;
        c.kappa = {kappa};
        return build_scenario(c);
    }

    EstimatedChannels estimates(const Scenario &s, std::uint64_t index)
    {
        GaussianSource rng(stream_seed(21, StreamTag::test, index));
        return mmse_estimate(pilot_observation(draw_channels(s, rng), s, rng), s);
    }

    double cosine(const cvec &a, const cvec &b) { return std::abs(a.dot(b)) / (a.norm() * b.norm()); }
}

TEST_CASE("MRT precoder scales the estimates", "[precoding]")
{
    const Scenario s = reference_scenario();
    const auto est = estimates(s, 1);
    const std::vector<double> ones(3, 1.0);
    const auto unit = mrt_precoder(est, ones);
    CHECK(unit.scheme == Scheme::mrt);
    for (int j = 0; j < 3; ++j)
        CHECK(unit.g[j] == est.hhat[j]);

    const std::vector<double> theta{0.25, 0.5, 2.0};
    const auto scaled = mrt_precoder(est, theta);
    for (int j = 0; j < 3; ++j)
        CHECK((scaled.g[j] - std::sqrt(theta[j]) * est.hhat[j]).norm() <= 1e-14 * scaled.g[j].norm());

    const std::vector<double> bad{1.0, 0.0, 1.0};
    CHECK_THROWS_AS(mrt_precoder(est, bad), std::invalid_argument);
    const std::vector<double> short_list{1.0};
    CHECK_THROWS_AS(mrt_precoder(est, short_list), std::invalid_argument);
}

TEST_CASE("deterministic channels give the exact MRT normalizer", "[precoding]")
{
    SECTION("single UE with ||hhat||^2 = 4")
    {
        ScenarioConfig c;
        c.L = 1;
        c.K = 1;
        c.N = 4;
        c.kappa = {1e20};
        c.rho_tr_db = 10000.0;
        const Scenario s = build_scenario_with_gains(c, GainTable(1, 1, 1.0));
        const auto n = estimate_normalizer(s, Scheme::mrt, 50, 1);
        CHECK(n.value[0] == Approx(0.25).epsilon(1e-9));
        GaussianSource rng(3);
        const auto est = draw_estimates(s, rng);
        const auto g = mrt_precoder(est, n.value);
        CHECK(g.g[0].squaredNorm() == Approx(1.0).epsilon(1e-9));
    }
    SECTION("several cells: K / sum ||hbar||^2")
    {
        ScenarioConfig c;
        c.kappa = {1e20};
        c.rho_tr_db = 10000.0;
        const Scenario s = build_scenario(c);
        const auto n = estimate_normalizer(s, Scheme::mrt, 20, 1);
        for (int j = 0; j < 3; ++j)
            CHECK(n.value[j] == Approx(10.0 / s.los_matrix(j).squaredNorm()).epsilon(1e-9));
    }
}

TEST_CASE("doubling every gain halves the MRT normalizer", "[precoding]")
{
    ScenarioConfig c;
    c.rho_tr_db = 10000.0;
    const Scenario base = build_scenario(c);
    GainTable doubled = base.beta_table();
    for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
            for (int k = 0; k < 10; ++k)
                doubled(j, l, k) *= 2.0;
    const Scenario twice = build_scenario_with_gains(c, doubled);
    const auto a = estimate_normalizer(base, Scheme::mrt, 200, 9);
    const auto b = estimate_normalizer(twice, Scheme::mrt, 200, 9);
    for (int j = 0; j < 3; ++j)
        CHECK(b.value[j] == Approx(0.5 * a.value[j]).epsilon(1e-12));
}

TEST_CASE("RZF directions", "[precoding]")
{
    const Scenario s = reference_scenario();
    const auto est = estimates(s, 2);

    SECTION("resolvent and co-resolvent routes agree")
    {
        for (int j = 0; j < 3; ++j)
        {
            const cmat a = rzf_directions(est.hhat[j], s.lambda(j), RzfRoute::resolvent);
            const cmat b = rzf_directions(est.hhat[j], s.lambda(j), RzfRoute::coresolvent);
            CHECK((a - b).norm() <= 1e-10 * a.norm());
            const cmat q = rzf_resolvent(est.hhat[j], s.lambda(j));
            CHECK((a - q * est.hhat[j] / 100.0).norm() <= 1e-10 * a.norm());
        }
    }
    SECTION("heavy regularization aligns RZF with MRT")
    {
        for (RzfRoute route : {RzfRoute::resolvent, RzfRoute::coresolvent})
        {
            const cmat u = rzf_directions(est.hhat[0], 1e6, route);
            for (int k = 0; k < 10; ++k)
                CHECK(cosine(u.col(k), est.hhat[0].col(k)) > 1.0 - 1e-6);
        }
    }
    SECTION("rank-one closed form")
    {
        const int N = 16;
        cmat h = cmat::Zero(N, 1);
        h(0, 0) = std::sqrt(static_cast<double>(N));
        const double lambda = 0.3;
        const cmat expected = h / (N * (1.0 + lambda));
        for (RzfRoute route : {RzfRoute::resolvent, RzfRoute::coresolvent})
            CHECK((rzf_directions(h, lambda, route) - expected).norm() <= 1e-12 * expected.norm());
        const cmat q = rzf_resolvent(h, lambda);
        CHECK((q * h / static_cast<double>(N) - expected).norm() <= 1e-12 * expected.norm());
    }
    SECTION("resolvent is Hermitian, positive definite and well conditioned")
    {
        for (int j = 0; j < 3; ++j)
        {
            const cmat q = rzf_resolvent(est.hhat[j], s.lambda(j));
            CHECK((q - q.adjoint()).norm() <= 1e-10 * q.norm());
            // eigenvalues of Q are 1 / (lambda + eig(A)); those of A = Q^{-1} are >= lambda
            cmat A = est.hhat[j] * est.hhat[j].adjoint() / 100.0;
            A.diagonal().array() += s.lambda(j);
            const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<cmat>(A).eigenvalues();
            CHECK(ev.minCoeff() >= s.lambda(j) - 1e-10);
            CHECK(ev.maxCoeff() / ev.minCoeff() < 1e6);
        }
    }
    SECTION("precoder set applies sqrt(psi)")
    {
        const std::vector<double> psi{2.0, 3.0, 4.0};
        const std::vector<double> lambda{s.lambda(0), s.lambda(1), s.lambda(2)};
        const auto p = rzf_precoder(est, lambda, psi);
        CHECK(p.scheme == Scheme::rzf);
        for (int j = 0; j < 3; ++j)
        {
            const cmat u = rzf_directions(est.hhat[j], lambda[j], RzfRoute::resolvent);
            CHECK((p.g[j] - std::sqrt(psi[j]) * u).norm() <= 1e-12 * p.g[j].norm());
        }
        const std::vector<double> zero{0.0, 1.0, 1.0};
        CHECK_THROWS_AS(rzf_precoder(est, zero, psi), std::invalid_argument);
        CHECK_THROWS_AS(rzf_precoder(est, lambda, zero), std::invalid_argument);
    }
}

TEST_CASE("estimated normalizers meet the power constraint on fresh draws", "[precoding][stats]")
{
    const Scenario s = reference_scenario();
    for (Scheme scheme : {Scheme::mrt, Scheme::rzf})
    {
        const auto n = estimate_normalizer(s, scheme, kDefaultNormalizerSamples, 1);
        for (int j = 0; j < 3; ++j)
        {
            CHECK(n.value[j] > 0.0);
            CHECK(n.value[j] * n.mean_power[j] == Approx(1.0).epsilon(1e-14));
            if (scheme == Scheme::mrt)
                CHECK(n.relative_std_error(j) < 0.01);
        }
        stats::Running power[3];
        for (int t = 0; t < 2000; ++t)
        {
            const auto est = estimates(s, 10'000 + static_cast<std::uint64_t>(t));
            const std::vector<double> lambda{s.lambda(0), s.lambda(1), s.lambda(2)};
            const auto p = scheme == Scheme::mrt ? mrt_precoder(est, n.value)
                                                 : rzf_precoder(est, lambda, n.value, RzfRoute::coresolvent);
            for (int j = 0; j < 3; ++j)
                power[j].add(p.g[j].squaredNorm() / 10.0);
        }
        for (int j = 0; j < 3; ++j)
        {
            CHECK(power[j].mean() >= 0.97);
            CHECK(power[j].mean() <= 1.03);
        }
    }
}

TEST_CASE("MRT normalizer scale in the symmetric layout", "[precoding][stats]")
{
    // beta = 1 on own links, 0.3 across cells, orthogonal LOS: the normalizer is
    // 1 / (N (phi + kappa / (1 + kappa)))
    ScenarioConfig c;
    c.K = 4;
    c.N = 64;
    c.kappa = {2.0};
    c.los_model = LosModel::dft_orthogonal;
    GainTable beta(3, 4, 0.3);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 4; ++k)
            beta(j, j, k) = 1.0;
    const Scenario s = build_scenario_with_gains(c, beta);
    const auto n = estimate_normalizer(s, Scheme::mrt, kDefaultNormalizerSamples, 4);
    const double expected = 1.0 / (64.0 * (s.phi(0, 0, 0) + 2.0 / 3.0));
    for (int j = 0; j < 3; ++j)
        CHECK(std::abs(n.value[j] - expected) <= 3.0 * n.std_error[j]);
}

TEST_CASE("normalizer estimation is independent of the worker count", "[precoding]")
{
    const Scenario s = reference_scenario();
    const auto a = estimate_normalizer(s, Scheme::rzf, 300, 5, 1);
    const auto b = estimate_normalizer(s, Scheme::rzf, 300, 5, 3);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK_THROWS_AS(estimate_normalizer(s, Scheme::mrt, 0, 5), std::invalid_argument);
}
