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

#ifndef RICIAN_DETEQUIV_HPP
#define RICIAN_DETEQUIV_HPP

#include "rician/common.hpp"
#include "rician/montecarlo.hpp"
#include "rician/scenario.hpp"

#include <optional>
#include <span>
#include <vector>

namespace rician
{
    struct FixedPointOptions
    {
        double tol = 1e-9; // on the relative change of delta and of 1 + delta_tilde
        int max_iter = 10'000;
        double damping = 0.5;
        std::optional<double> initial_delta;       // default 1/lambda
        std::optional<double> initial_delta_tilde; // default 1/lambda
    };

    /// Solution of the coupled resolvent equations of one cell
    ///   delta   = (1/N) tr T,          T  = (lambda (1 + delta_tilde) I_N + (1/N) Hbar (I + delta Phi)^{-1} Hbar^H)^{-1}
    ///   delta~  = (1/N) tr Phi T~,     T~ = (lambda (I + delta Phi) + (1/N) Hbar^H Hbar / (1 + delta_tilde))^{-1}
    /// together with the derived scalars. T is kept in factored form; T() materializes it.
    struct FixedPointSolution
    {
        int cell = 0;
        double lambda = 0.0;
        double delta = 0.0;
        double delta_tilde = 0.0;
        cmat T_tilde;          // K x K
        double theta_aux = 0.0;       // (1/N) tr T^2
        double theta_tilde_aux = 0.0; // (1/N) tr (Phi T~)^2
        double F = 0.0;               // (1/N^2) tr T^2 Hbar (I + delta Phi)^{-2} Phi Hbar^H
        double Delta = 0.0;           // (1 - F)^2 - lambda^2 theta theta~
        double residual = 0.0;
        int iterations = 0;

        cmat los;               // Hbar_jj, N x K
        Eigen::VectorXd phi;    // diagonal of Phi_jj

        /// N x N matrix T (O(N^2) memory).
        cmat T() const;
    };

    /// Damped Picard iteration (delta first, then delta_tilde) followed by one undamped sweep.
    /// Traces are evaluated through K x K reductions of the N x N resolvent.
    /// Throws convergence_error after max_iter iterations.
    FixedPointSolution solve_fixed_point(const Scenario &scenario, int cell, double lambda,
                                         const FixedPointOptions &options = {});

    /// Right-hand sides of the two fixed-point equations at (delta, delta_tilde).
    struct FixedPointMap
    {
        double delta = 0.0;
        double delta_tilde = 0.0;
    };
    FixedPointMap fixed_point_map(const Scenario &scenario, int cell, double lambda, double delta, double delta_tilde);

    /// Scaled defect max(|f1 - delta| / delta, |f2 - delta~| / (1 + delta~)).
    double fixed_point_residual(const Scenario &scenario, int cell, double lambda, double delta, double delta_tilde);

    struct DetEquivReport
    {
        Scheme scheme = Scheme::mrt;
        Provenance provenance = Provenance::de;
        int L = 0;
        int K = 0;
        UeTable<double> gamma;
        UeTable<double> numerator;
        UeTable<double> s_bar;
        UeTable<double> contamination; // sum over l != j of the pilot-contamination terms
        UeTable<char> unbounded;
        std::vector<double> normalizer; // theta_bar (MRT) or psi_bar (RZF)

        // RZF only
        UeTable<double> u_bar;
        UeTable<double> varsigma;
        std::vector<double> nu_bar;
        GainTable xi; // (l, j, k)
        GainTable mu; // (l, j, k)
    };

    /// MRT deterministic equivalent.
    DetEquivReport mrt_det_sinr(const Scenario &scenario);

    /// RZF deterministic equivalent from per-cell fixed points (one per cell, in order).
    /// Throws convergence_error when some Delta_l <= 0.
    DetEquivReport rzf_det_sinr(const Scenario &scenario, std::span<const FixedPointSolution> fixed_points);

    /// Solves every cell's fixed point with the scenario's lambda and evaluates the RZF equivalent.
    /// The interference term is a difference of O(1/lambda) quantities; beyond lambda ~ 1e6
    /// rounding dominates it.
    DetEquivReport rzf_det_sinr(const Scenario &scenario, const FixedPointOptions &options = {});

    std::vector<FixedPointSolution> solve_all_fixed_points(const Scenario &scenario, const FixedPointOptions &options = {});

    /// Rates and aggregates from a deterministic-equivalent or limit report.
    RateReport to_rate_report(const DetEquivReport &report);
}

#endif
