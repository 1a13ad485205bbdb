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

#ifndef RICIAN_SCENARIO_HPP
#define RICIAN_SCENARIO_HPP

#include "rician/common.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rician
{
    enum class LosModel
    {
        ula,
        dft_orthogonal,
        explicit_vectors
    };

    enum class Geometry
    {
        triangle_default,
        explicit_positions
    };

    std::string_view to_string(LosModel m);
    std::string_view to_string(Geometry g);

    struct Point
    {
        double x = 0.0;
        double y = 0.0;
        friend bool operator==(const Point &, const Point &) = default;
    };

    /// Downlink regularizer: either a fixed value shared by all cells or lambda = K / (N rho_dl).
    struct LambdaRule
    {
        bool k_over_n_rho = true;
        double value = 0.0;

        static LambdaRule k_over_n_rho_rule() { return {true, 0.0}; }
        static LambdaRule fixed(double v) { return {false, v}; }

        double resolve(int K, int N, double rho_dl_linear) const;
    };

    struct ScenarioConfig
    {
        int L = 3;
        int K = 10;
        int N = 100;
        double pathloss_exponent = 2.5;
        double rho_tr_db = 6.0;
        double rho_dl_db = 10.0;
        std::vector<double> kappa{5.0}; // one value for all UEs, or L*K values (cell-major)
        LambdaRule lambda = LambdaRule::k_over_n_rho_rule();
        LosModel los_model = LosModel::ula;
        Geometry geometry = Geometry::triangle_default;
        double min_distance = 0.1;
        std::uint64_t seed = 1;

        // Geometry::explicit_positions: L BS positions and L*K UE positions (cell-major).
        std::vector<Point> bs_positions;
        std::vector<Point> ue_positions;

        // LosModel::explicit_vectors: L*K direction vectors of length N, (1/N)||a||^2 = 1.
        std::vector<cvec> explicit_los;

        double kappa_of(int j, int k) const { return kappa.size() == 1 ? kappa.front() : kappa[static_cast<std::size_t>(j) * K + k]; }

        /// Throws config_error on any violated invariant.
        void validate() const;
    };

    /// Immutable system description: gains, estimation-quality table and LOS components.
    class Scenario
    {
    public:
        const ScenarioConfig &config() const { return config_; }
        int L() const { return config_.L; }
        int K() const { return config_.K; }
        int N() const { return config_.N; }

        double rho_tr() const { return rho_tr_; }
        double rho_dl() const { return rho_dl_; }
        double lambda(int j) const { return lambda_[static_cast<std::size_t>(j)]; }
        double kappa(int j, int k) const { return config_.kappa_of(j, k); }

        /// Large-scale gain from BS j to UE k of cell l.
        double beta(int j, int l, int k) const { return beta_(j, l, k); }
        /// Diffuse gain: beta / (1 + kappa) on the own-cell link, beta otherwise.
        double d(int j, int l, int k) const { return d_(j, l, k); }
        double phi(int j, int l, int k) const { return phi_(j, l, k); }

        const GainTable &beta_table() const { return beta_; }
        const GainTable &d_table() const { return d_; }
        const GainTable &phi_table() const { return phi_; }

        /// Unit-power LOS direction a_jjk, (1/N)||a||^2 = 1.
        const cvec &los_direction(int j, int k) const { return directions_(j, k); }
        /// LOS component sqrt(d_jjk kappa_jk) a_jjk.
        cvec los(int j, int k) const { return los_matrix_[static_cast<std::size_t>(j)].col(k); }
        /// N x K matrix of the LOS components of cell j.
        const cmat &los_matrix(int j) const { return los_matrix_[static_cast<std::size_t>(j)]; }
        /// K x K matrix (1/N) Hbar_jj^H Hbar_jj.
        const cmat &los_gram(int j) const { return los_gram_[static_cast<std::size_t>(j)]; }

        /// (1/N) ||hbar_jjk||^2.
        double los_power(int j, int k) const { return los_gram_[static_cast<std::size_t>(j)](k, k).real(); }

        /// (1/sqrt(N)) ||Hbar_jj|| (spectral norm).
        double los_spectral_norm(int j) const;

        const std::vector<Point> &bs_positions() const { return bs_positions_; }
        const Point &ue_position(int l, int k) const { return ue_positions_(l, k); }

        friend Scenario build_scenario(const ScenarioConfig &config);
        friend Scenario build_scenario_with_gains(const ScenarioConfig &config, const GainTable &beta);

    private:
        Scenario() = default;
        void finish(); // fills d, phi, LOS tables from config_ and beta_

        ScenarioConfig config_;
        double rho_tr_ = 0.0;
        double rho_dl_ = 0.0;
        std::vector<double> lambda_;
        GainTable beta_;
        GainTable d_;
        GainTable phi_;
        UeTable<cvec> directions_;
        std::vector<cmat> los_matrix_;
        std::vector<cmat> los_gram_;
        std::vector<Point> bs_positions_;
        UeTable<Point> ue_positions_;
    };

    /// Builds geometry, path loss (beta = 1/x^alpha), diffuse gains, phi and LOS tables.
    Scenario build_scenario(const ScenarioConfig &config);

    /// Same as build_scenario but with a caller-supplied beta table (positions are still
    /// drawn so that ULA directions exist; they do not influence the gains).
    Scenario build_scenario_with_gains(const ScenarioConfig &config, const GainTable &beta);

    /// phi_jlk = d_jjk d_jlk / (1/rho_tr + sum_n d_jnk).
    GainTable estimation_quality(const GainTable &d, double rho_tr);

    /// LOS direction with (1/N)||a||^2 = 1. ula: a_n = exp(i pi n sin(azimuth));
    /// dft_orthogonal: sqrt(N) times column k of the unitary N-point DFT.
    cvec los_vector(int N, LosModel model, int k, double azimuth);

    /// Default BS sites of the triangle layout (first L of three mutually tangent unit cells).
    std::vector<Point> triangle_sites(int L);

    // Config file: "key = value" per line, '#' starts a comment, arrays comma-separated.
    /// Parses the key = value format. Syntax errors always throw config_error; semantic
    /// checks (ScenarioConfig::validate) run only when validate is true.
    ScenarioConfig parse_scenario_config(std::string_view text, bool validate = true);
    ScenarioConfig load_scenario_config(const std::filesystem::path &path, bool validate = true);
    std::string format_scenario_config(const ScenarioConfig &config);
}

#endif
