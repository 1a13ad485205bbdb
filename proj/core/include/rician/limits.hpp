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

#ifndef RICIAN_LIMITS_HPP
#define RICIAN_LIMITS_HPP

#include "rician/common.hpp"
#include "rician/detequiv.hpp"
#include "rician/scenario.hpp"

namespace rician
{
    // Large-array limits (N -> infinity with K/N -> 0). A denominator that vanishes up to
    // rounding (below kUnboundedTolerance times the size of its ingredients) is reported
    // through the unbounded flag rather than as a floating-point infinity.
    inline constexpr double kUnboundedTolerance = 1e-12;

    /// MRT limit: own-cell LOS cross terms plus pilot contamination.
    DetEquivReport mrt_limit_sinr(const Scenario &scenario);

    /// RZF limit with T~_j = (lambda_j I + Phi_jj + (1/N) Hbar^H Hbar)^{-1}.
    DetEquivReport rzf_limit_sinr(const Scenario &scenario);

    /// Largest |(1/N) hbar_jji^H hbar_jjk| over all cells and i != k.
    double max_los_cross_product(const Scenario &scenario);

    inline constexpr double kFavorablePropagationTolerance = 1e-8;

    /// MRT under favorable propagation; pilot contamination is the only impairment left.
    /// Throws premise_error when LOS cross products exceed kFavorablePropagationTolerance.
    DetEquivReport favorable_mrt(const Scenario &scenario);

    /// RZF under favorable propagation (diagonal co-resolvent).
    DetEquivReport favorable_rzf(const Scenario &scenario);

    /// Same quantity as favorable_rzf, evaluated through the ratio-of-regularized-gains form.
    DetEquivReport favorable_rzf_ratio_form(const Scenario &scenario);

    /// Symmetric case: intra-cell gain 1 with Rician factor kappa, inter-cell gain alpha
    /// (Rayleigh), orthogonal LOS directions.
    struct SymmetricCaseParams
    {
        double kappa = 0.0;
        double alpha = 0.3;
        int L = 3;
        int K = 10;
        int N = 100;
        double rho_tr = 0.0; // linear
        double rho_dl = 0.0; // linear

        double L_bar() const { return alpha * (L - 1) + 1.0 / (1.0 + kappa); }
        double nu() const { return rho_tr / (1.0 + rho_tr * L_bar()); }
        double tau() const { return 1.0 / (1.0 + kappa) + kappa / nu(); }
        double A() const;
        double B() const;

        void validate() const;
    };

    /// The four additive terms of 1 / gamma and the resulting SINR.
    struct SymmetricMrtBreakdown
    {
        double noise = 0.0;
        double estimation = 0.0;   // (1/rho_tr) A
        double interference = 0.0; // (K/N) L_bar B
        double contamination = 0.0;
        double gamma = 0.0;
    };

    /// Closed-form MRT SINR of the symmetric case, assembled from the noise / estimation /
    /// interference / pilot-contamination decomposition.
    SymmetricMrtBreakdown symmetric_mrt_breakdown(const SymmetricCaseParams &params);

    double symmetric_mrt_closed_form(const SymmetricCaseParams &params);

    /// The same SINR written in terms of nu directly (undecomposed form).
    double symmetric_mrt_closed_form_expanded(const SymmetricCaseParams &params);

    /// Scenario realizing the symmetric premise: beta_jjk = 1, beta_jlk = alpha, dft_orthogonal LOS.
    Scenario make_symmetric_scenario(const SymmetricCaseParams &params);
}

#endif
