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

#include "rician/limits.hpp"

#include <limits>

namespace rician
{
    namespace
    {
        DetEquivReport empty_report(const Scenario &s, Scheme scheme)
        {
            DetEquivReport rep;
            rep.scheme = scheme;
            rep.provenance = Provenance::limit;
            rep.L = s.L();
            rep.K = s.K();
            rep.gamma = rep.numerator = rep.s_bar = rep.contamination = UeTable<double>(s.L(), s.K());
            rep.unbounded = UeTable<char>(s.L(), s.K(), 0);
            return rep;
        }

        // gamma = num / den, or the unbounded flag when den vanishes relative to scale
        void assign_ratio(DetEquivReport &rep, int j, int k, double num, double den, double scale)
        {
            rep.numerator(j, k) = num;
            if (!(num > 0.0))
            {
                rep.gamma(j, k) = 0.0;
                return;
            }
            if (den <= kUnboundedTolerance * scale)
            {
                rep.unbounded(j, k) = 1;
                rep.gamma(j, k) = std::numeric_limits<double>::infinity();
                return;
            }
            rep.gamma(j, k) = num / den;
        }

        UeTable<double> estimate_power(const Scenario &s)
        {
            UeTable<double> P(s.L(), s.K());
            for (int l = 0; l < s.L(); ++l)
                for (int i = 0; i < s.K(); ++i)
                    P(l, i) = s.phi(l, l, i) + s.los_power(l, i);
            return P;
        }

        std::vector<double> mrt_normalizers(const UeTable<double> &P)
        {
            std::vector<double> theta;
            for (int l = 0; l < P.cells(); ++l)
            {
                double sum = 0.0;
                for (int i = 0; i < P.users(); ++i)
                    sum += P(l, i);
                theta.push_back(sum > 0.0 ? P.users() / sum : 0.0);
            }
            return theta;
        }

        void require_favorable(const Scenario &s)
        {
            const double c = max_los_cross_product(s);
            if (c > kFavorablePropagationTolerance)
                throw premise_error("favorable propagation does not hold: LOS cross product " + std::to_string(c));
        }
    }

    double max_los_cross_product(const Scenario &s)
    {
        double worst = 0.0;
        for (int j = 0; j < s.L(); ++j)
        {
            const cmat &G = s.los_gram(j);
            for (int i = 0; i < s.K(); ++i)
                for (int k = 0; k < s.K(); ++k)
                    if (i != k)
                        worst = std::max(worst, std::abs(G(i, k)));
        }
        return worst;
    }

    DetEquivReport mrt_limit_sinr(const Scenario &s)
    {
        const int L = s.L(), K = s.K();
        auto rep = empty_report(s, Scheme::mrt);
        const auto P = estimate_power(s);
        rep.normalizer = mrt_normalizers(P);
        for (int j = 0; j < L; ++j)
        {
            const cmat &G = s.los_gram(j);
            for (int k = 0; k < K; ++k)
            {
                double cross = 0.0;
                for (int i = 0; i < K; ++i)
                    if (i != k)
                        cross += std::norm(G(i, k));
                double pc = 0.0;
                for (int l = 0; l < L; ++l)
                    if (l != j)
                        pc += rep.normalizer[l] * s.phi(l, j, k) * s.phi(l, j, k);
                rep.s_bar(j, k) = rep.normalizer[j] * cross;
                rep.contamination(j, k) = pc;
                const double num = rep.normalizer[j] * P(j, k) * P(j, k);
                assign_ratio(rep, j, k, num, rep.s_bar(j, k) + pc, num);
            }
        }
        return rep;
    }

    DetEquivReport rzf_limit_sinr(const Scenario &s)
    {
        const int L = s.L(), K = s.K();
        auto rep = empty_report(s, Scheme::rzf);
        rep.varsigma = rep.u_bar = UeTable<double>(L, K);
        rep.xi = rep.mu = GainTable(L, K);
        rep.nu_bar.resize(static_cast<std::size_t>(L));

        UeTable<double> t(L, K), off(L, K); // off(l, k) = sum_{i != k} |[T~_l]_ik|^2
        for (int l = 0; l < L; ++l)
        {
            const double lam = s.lambda(l);
            const cmat &G = s.los_gram(l);
            Eigen::VectorXd phi(K);
            for (int k = 0; k < K; ++k)
                phi(k) = s.phi(l, l, k);
            cmat A = G;
            A.diagonal().array() += lam + phi.array();
            Eigen::LLT<cmat> llt(A);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error("rzf_limit_sinr: factorization failed");
            const cmat Tt = llt.solve(cmat::Identity(K, K));
            const cmat TGT = Tt * G * Tt;
            const cmat TPT = Tt * phi.asDiagonal() * Tt;
            const double power = (TPT.trace().real() + TGT.trace().real()) / K;
            rep.normalizer.push_back(power > 0.0 ? 1.0 / power : 0.0);
            rep.nu_bar[l] = 1.0 / (lam * lam);
            for (int k = 0; k < K; ++k)
            {
                const double tk = Tt(k, k).real();
                t(l, k) = tk;
                off(l, k) = Tt.col(k).squaredNorm() - tk * tk;
                rep.u_bar(l, k) = 1.0 / (lam * tk) - 1.0;
                rep.varsigma(l, k) = TGT(k, k).real() / (lam * lam * tk * tk) + (TPT(k, k).real() / (tk * tk) - phi(k)) / (lam * lam);
            }
        }

        for (int j = 0; j < L; ++j)
            for (int k = 0; k < K; ++k)
            {
                // sum_l normalizer_l (xi - lambda_l mu) less signal and contamination, per term:
                // lambda_j^2 off(j, k) for l = j, phi_ljk^2 off(l, k) otherwise
                double sb = 0.0, pc = 0.0;
                for (int l = 0; l < L; ++l)
                {
                    const double lam = s.lambda(l);
                    const double tk = t(l, k);
                    const double d = s.d(l, j, k);
                    const double ph = s.phi(l, j, k);
                    double xi, mu;
                    if (l != j)
                    {
                        xi = d / lam - tk * ph * ph / lam;
                        mu = (d - 2.0 * ph * ph * tk) / (lam * lam) + ph * ph * (s.phi(l, l, k) / (lam * lam) + rep.varsigma(l, k)) * tk * tk;
                        pc += rep.normalizer[l] * ph * ph * tk * tk;
                        sb += rep.normalizer[l] * ph * ph * off(l, k);
                    }
                    else
                    {
                        xi = (d - ph) / lam + 1.0 - lam * tk;
                        mu = (d - ph * (1.0 - lam * lam * tk * tk)) / (lam * lam) + lam * lam * tk * tk * rep.varsigma(l, k);
                        sb += rep.normalizer[l] * lam * lam * off(l, k);
                    }
                    rep.xi(l, j, k) = xi;
                    rep.mu(l, j, k) = mu;
                }
                const double sig = 1.0 - s.lambda(j) * t(j, k);
                const double num = rep.normalizer[j] * sig * sig;
                rep.s_bar(j, k) = sb;
                rep.contamination(j, k) = pc;
                assign_ratio(rep, j, k, num, sb + pc, num);
            }
        return rep;
    }

    DetEquivReport favorable_mrt(const Scenario &s)
    {
        require_favorable(s);
        const int L = s.L(), K = s.K();
        auto rep = empty_report(s, Scheme::mrt);
        const auto P = estimate_power(s);
        rep.normalizer = mrt_normalizers(P);
        for (int j = 0; j < L; ++j)
            for (int k = 0; k < K; ++k)
            {
                double pc = 0.0;
                for (int l = 0; l < L; ++l)
                    if (l != j)
                        pc += rep.normalizer[l] * s.phi(l, j, k) * s.phi(l, j, k);
                rep.contamination(j, k) = pc;
                const double num = rep.normalizer[j] * P(j, k) * P(j, k);
                assign_ratio(rep, j, k, num, pc, num);
            }
        return rep;
    }

    namespace
    {
        // psi_bar_j = ( (1/K) sum_k P_jk / (lambda_j + P_jk)^2 )^{-1}
        std::vector<double> favorable_rzf_normalizers(const Scenario &s, const UeTable<double> &P)
        {
            std::vector<double> psi;
            for (int j = 0; j < s.L(); ++j)
            {
                double acc = 0.0;
                for (int k = 0; k < s.K(); ++k)
                {
                    const double r = s.lambda(j) + P(j, k);
                    acc += P(j, k) / (r * r);
                }
                psi.push_back(s.K() / acc);
            }
            return psi;
        }
    }

    DetEquivReport favorable_rzf(const Scenario &s)
    {
        require_favorable(s);
        const int L = s.L(), K = s.K();
        auto rep = empty_report(s, Scheme::rzf);
        const auto P = estimate_power(s);
        rep.normalizer = favorable_rzf_normalizers(s, P);
        for (int j = 0; j < L; ++j)
            for (int k = 0; k < K; ++k)
            {
                double pc = 0.0;
                for (int l = 0; l < L; ++l)
                    if (l != j)
                    {
                        const double c = s.phi(l, j, k) / (s.lambda(l) + P(l, k));
                        pc += rep.normalizer[l] * c * c;
                    }
                rep.contamination(j, k) = pc;
                const double g = P(j, k) / (s.lambda(j) + P(j, k));
                const double num = rep.normalizer[j] * g * g;
                assign_ratio(rep, j, k, num, pc, num);
            }
        return rep;
    }

    DetEquivReport favorable_rzf_ratio_form(const Scenario &s)
    {
        require_favorable(s);
        const int L = s.L(), K = s.K();
        auto rep = empty_report(s, Scheme::rzf);
        const auto P = estimate_power(s);
        rep.normalizer = favorable_rzf_normalizers(s, P);
        for (int j = 0; j < L; ++j)
            for (int k = 0; k < K; ++k)
            {
                const double own = s.lambda(j) + P(j, k);
                double den = 0.0;
                for (int l = 0; l < L; ++l)
                    if (l != j)
                    {
                        const double r = own / (s.lambda(l) + P(l, k));
                        den += r * r * rep.normalizer[l] * s.phi(l, j, k) * s.phi(l, j, k);
                    }
                rep.contamination(j, k) = den;
                const double num = rep.normalizer[j] * P(j, k) * P(j, k);
                assign_ratio(rep, j, k, num, den, num);
            }
        return rep;
    }

    // ---------- symmetric case ----------

    void SymmetricCaseParams::validate() const
    {
        if (L < 1 || K < 1 || N < 1 || K >= N)
            throw config_error("symmetric case: need L, K, N >= 1 and K < N");
        if (!(kappa >= 0.0) || !(alpha >= 0.0) || !std::isfinite(kappa) || !std::isfinite(alpha))
            throw config_error("symmetric case: kappa and alpha must be finite and non-negative");
        if (!(rho_tr > 0.0) || !(rho_dl > 0.0))
            throw config_error("symmetric case: SNRs must be positive");
    }

    double SymmetricCaseParams::A() const
    {
        const double kn = static_cast<double>(K) / N;
        const double t = tau();
        return (kn * L_bar() + 1.0 / (N * rho_dl)) * (1.0 + kappa) / t + kn / (t * t) * kappa / (1.0 + kappa);
    }

    double SymmetricCaseParams::B() const
    {
        const double t = tau();
        return L_bar() * (1.0 + kappa) / t + kappa / ((1.0 + kappa) * t * t);
    }

    SymmetricMrtBreakdown symmetric_mrt_breakdown(const SymmetricCaseParams &p)
    {
        p.validate();
        const double t = p.tau();
        const double lb = p.L_bar();
        SymmetricMrtBreakdown out;
        out.noise = lb / (p.N * p.rho_dl) * (1.0 + p.kappa) / t;
        out.estimation = p.A() / p.rho_tr;
        out.interference = static_cast<double>(p.K) / p.N * lb * p.B();
        out.contamination = p.alpha / (t * t) * (lb - 1.0 / (1.0 + p.kappa));
        out.gamma = 1.0 / (out.noise + out.estimation + out.interference + out.contamination);
        return out;
    }

    double symmetric_mrt_closed_form(const SymmetricCaseParams &params)
    {
        return symmetric_mrt_breakdown(params).gamma;
    }

    double symmetric_mrt_closed_form_expanded(const SymmetricCaseParams &p)
    {
        p.validate();
        const double t = p.tau();
        const double nu = p.nu();
        const double lb = p.L_bar();
        const double kp = 1.0 + p.kappa;
        const double inv = kp / (nu * p.N * p.rho_dl * t) +
                           static_cast<double>(p.K) / (p.N * nu) * (lb * kp / t + p.kappa / (kp * t * t)) +
                           p.alpha / (t * t) * (lb - 1.0 / kp);
        return 1.0 / inv;
    }

    Scenario make_symmetric_scenario(const SymmetricCaseParams &p)
    {
        p.validate();
        ScenarioConfig cfg;
        cfg.L = p.L;
        cfg.K = p.K;
        cfg.N = p.N;
        cfg.kappa = {p.kappa};
        cfg.rho_tr_db = 10.0 * std::log10(p.rho_tr);
        cfg.rho_dl_db = 10.0 * std::log10(p.rho_dl);
        cfg.los_model = LosModel::dft_orthogonal;
        cfg.geometry = Geometry::explicit_positions;
        // positions only feed ULA angles, unused with DFT directions; spread UEs on a ring
        for (int l = 0; l < p.L; ++l)
            cfg.bs_positions.push_back({3.0 * l, 0.0});
        for (int l = 0; l < p.L; ++l)
            for (int k = 0; k < p.K; ++k)
                cfg.ue_positions.push_back({3.0 * l + 0.5, 0.0});
        GainTable beta(p.L, p.K, p.alpha);
        for (int j = 0; j < p.L; ++j)
            for (int k = 0; k < p.K; ++k)
                beta(j, j, k) = 1.0;
        return build_scenario_with_gains(cfg, beta);
    }
}
