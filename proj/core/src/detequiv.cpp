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

#include <sstream>

namespace rician
{
    namespace
    {
        Eigen::VectorXd phi_diagonal(const Scenario &s, int j)
        {
            Eigen::VectorXd phi(s.K());
            for (int k = 0; k < s.K(); ++k)
                phi(k) = s.phi(j, j, k);
            return phi;
        }

        // Everything about T and T~ at a given (delta, delta~) reduces to the K x K matrix
        //   M = (I + delta Phi + G / a)^{-1},  a = lambda (1 + delta~),  G = (1/N) Hbar^H Hbar,
        // through T = I/a - Hbar M Hbar^H / (a^2 N) and T~ = M / lambda.
        struct Reduced
        {
            double a = 0.0;
            cmat M;
        };

        Reduced reduce(const cmat &G, const Eigen::VectorXd &phi, double lambda, double delta, double delta_tilde)
        {
            const auto K = G.rows();
            Reduced r;
            r.a = lambda * (1.0 + delta_tilde);
            cmat A = G / r.a;
            A.diagonal().array() += 1.0 + delta * phi.array();
            Eigen::LLT<cmat> llt(A);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error("fixed point: co-resolvent factorization failed");
            r.M = llt.solve(cmat::Identity(K, K));
            return r;
        }

        double map_delta(const Reduced &r, const cmat &G, int N)
        {
            const double tr_mg = (r.M.cwiseProduct(G.transpose())).sum().real(); // tr(M G)
            return 1.0 / r.a - tr_mg / (r.a * r.a * N);
        }

        double map_delta_tilde(const Reduced &r, const Eigen::VectorXd &phi, double lambda, int N)
        {
            double acc = 0.0;
            for (Eigen::Index k = 0; k < phi.size(); ++k)
                acc += phi(k) * r.M(k, k).real();
            return acc / (lambda * N);
        }

        double scaled_defect(double delta, double delta_tilde, const FixedPointMap &f)
        {
            return std::max(std::abs(f.delta - delta) / delta,
                            std::abs(f.delta_tilde - delta_tilde) / (1.0 + delta_tilde));
        }
    }

    FixedPointMap fixed_point_map(const Scenario &scenario, int cell, double lambda, double delta, double delta_tilde)
    {
        const cmat &G = scenario.los_gram(cell);
        const auto phi = phi_diagonal(scenario, cell);
        const int N = scenario.N();
        const auto r = reduce(G, phi, lambda, delta, delta_tilde);
        return {map_delta(r, G, N), map_delta_tilde(r, phi, lambda, N)};
    }

    double fixed_point_residual(const Scenario &scenario, int cell, double lambda, double delta, double delta_tilde)
    {
        return scaled_defect(delta, delta_tilde, fixed_point_map(scenario, cell, lambda, delta, delta_tilde));
    }

    cmat FixedPointSolution::T() const
    {
        const auto N = los.rows();
        const double a = lambda * (1.0 + delta_tilde);
        const cmat M = lambda * T_tilde;
        cmat t = -(los * M * los.adjoint()) / (a * a * static_cast<double>(N));
        t.diagonal().array() += 1.0 / a;
        return t;
    }

    FixedPointSolution solve_fixed_point(const Scenario &scenario, int cell, double lambda, const FixedPointOptions &options)
    {
        if (!(lambda > 0.0))
            throw std::invalid_argument("solve_fixed_point: lambda must be positive");
        if (!(options.tol > 0.0))
            throw std::invalid_argument("solve_fixed_point: tol must be positive");
        if (!(options.damping > 0.0 && options.damping <= 1.0))
            throw std::invalid_argument("solve_fixed_point: damping must lie in (0, 1]");

        const int N = scenario.N();
        const cmat &G = scenario.los_gram(cell);
        const auto phi = phi_diagonal(scenario, cell);
        const double w = options.damping;

        double delta = options.initial_delta.value_or(1.0 / lambda);
        double delta_tilde = options.initial_delta_tilde.value_or(1.0 / lambda);
        if (!(delta > 0.0) || !(delta_tilde >= 0.0))
            throw std::invalid_argument("solve_fixed_point: initial values must be positive");

        int it = 0;
        bool converged = false;
        while (it < options.max_iter)
        {
            ++it;
            const double d_new = delta + w * (map_delta(reduce(G, phi, lambda, delta, delta_tilde), G, N) - delta);
            const double t_new = delta_tilde + w * (map_delta_tilde(reduce(G, phi, lambda, d_new, delta_tilde), phi, lambda, N) - delta_tilde);
            const double change = std::max(std::abs(d_new - delta) / delta, std::abs(t_new - delta_tilde) / (1.0 + delta_tilde));
            delta = d_new;
            delta_tilde = t_new;
            if (change < options.tol)
            {
                converged = true;
                break;
            }
        }
        if (!converged)
        {
            const double res = fixed_point_residual(scenario, cell, lambda, delta, delta_tilde);
            std::ostringstream msg;
            msg << "fixed point of cell " << cell << " did not converge in " << it << " iterations (residual " << res << ")";
            throw convergence_error(msg.str(), res, it);
        }

        // undamped polishing sweep
        delta = map_delta(reduce(G, phi, lambda, delta, delta_tilde), G, N);
        delta_tilde = map_delta_tilde(reduce(G, phi, lambda, delta, delta_tilde), phi, lambda, N);

        FixedPointSolution sol;
        sol.cell = cell;
        sol.lambda = lambda;
        sol.delta = delta;
        sol.delta_tilde = delta_tilde;
        sol.iterations = it;
        sol.residual = fixed_point_residual(scenario, cell, lambda, delta, delta_tilde);
        sol.los = scenario.los_matrix(cell);
        sol.phi = phi;

        const auto r = reduce(G, phi, lambda, delta, delta_tilde);
        const double a = r.a;
        const cmat &M = r.M;
        sol.T_tilde = M / lambda;

        const cmat MG = M * G;
        const double n = N;
        sol.theta_aux = 1.0 / (a * a) - 2.0 * MG.trace().real() / (a * a * a * n) + (MG * MG).trace().real() / (a * a * a * a * n);

        const cmat PT = phi.asDiagonal() * sol.T_tilde;
        sol.theta_tilde_aux = (PT * PT).trace().real() / n;

        // T Hbar / sqrt(N) = (Hbar / sqrt(N)) R with R = (I - M G / a) / a
        cmat R = -MG / a;
        R.diagonal().array() += 1.0;
        R /= a;
        Eigen::VectorXd weight(phi.size());
        for (Eigen::Index k = 0; k < phi.size(); ++k)
        {
            const double dk = 1.0 / (1.0 + delta * phi(k));
            weight(k) = dk * dk * phi(k);
        }
        sol.F = ((R.adjoint() * G * R) * weight.asDiagonal()).trace().real() / n;
        sol.Delta = (1.0 - sol.F) * (1.0 - sol.F) - lambda * lambda * sol.theta_aux * sol.theta_tilde_aux;
        return sol;
    }

    std::vector<FixedPointSolution> solve_all_fixed_points(const Scenario &scenario, const FixedPointOptions &options)
    {
        std::vector<FixedPointSolution> out;
        for (int j = 0; j < scenario.L(); ++j)
            out.push_back(solve_fixed_point(scenario, j, scenario.lambda(j), options));
        return out;
    }

    DetEquivReport mrt_det_sinr(const Scenario &s)
    {
        const int L = s.L(), K = s.K(), N = s.N();
        DetEquivReport rep;
        rep.scheme = Scheme::mrt;
        rep.provenance = Provenance::de;
        rep.L = L;
        rep.K = K;
        rep.gamma = rep.numerator = rep.s_bar = rep.contamination = UeTable<double>(L, K);
        rep.unbounded = UeTable<char>(L, K, 0);

        // P_li = phi_lli + (1/N) ||hbar_lli||^2
        UeTable<double> P(L, K);
        std::vector<double> sum_p(static_cast<std::size_t>(L), 0.0);
        for (int l = 0; l < L; ++l)
            for (int i = 0; i < K; ++i)
            {
                P(l, i) = s.phi(l, l, i) + s.los_power(l, i);
                sum_p[l] += P(l, i);
            }
        // a cell whose estimates carry no energy transmits nothing
        for (int l = 0; l < L; ++l)
            rep.normalizer.push_back(sum_p[l] > 0.0 ? K / sum_p[l] : 0.0);

        const double n = N;
        for (int j = 0; j < L; ++j)
        {
            const double theta_j = rep.normalizer[j];
            double sum_phi_j = 0.0;
            for (int i = 0; i < K; ++i)
                sum_phi_j += s.phi(j, j, i);
            const cmat &G = s.los_gram(j);
            for (int k = 0; k < K; ++k)
            {
                double sb = 0.0;
                for (int l = 0; l < L; ++l)
                    sb += rep.normalizer[l] * s.d(l, j, k) * sum_p[l];
                sb /= n;
                sb += theta_j * sum_phi_j * s.los_power(j, k) / n;
                double cross = 0.0;
                for (int i = 0; i < K; ++i)
                    if (i != k)
                        cross += std::norm(G(i, k));
                sb += theta_j * cross;

                double pc = 0.0;
                for (int l = 0; l < L; ++l)
                    if (l != j)
                        pc += rep.normalizer[l] * s.phi(l, j, k) * s.phi(l, j, k);

                rep.numerator(j, k) = theta_j * P(j, k) * P(j, k);
                rep.s_bar(j, k) = sb;
                rep.contamination(j, k) = pc;
                rep.gamma(j, k) = rep.numerator(j, k) / (1.0 / (n * s.rho_dl()) + sb + pc);
            }
        }
        return rep;
    }

    DetEquivReport rzf_det_sinr(const Scenario &s, std::span<const FixedPointSolution> fp)
    {
        const int L = s.L(), K = s.K(), N = s.N();
        if (fp.size() != static_cast<std::size_t>(L))
            throw std::invalid_argument("rzf_det_sinr: one fixed point per cell is required");

        DetEquivReport rep;
        rep.scheme = Scheme::rzf;
        rep.provenance = Provenance::de;
        rep.L = L;
        rep.K = K;
        rep.gamma = rep.numerator = rep.s_bar = rep.contamination = UeTable<double>(L, K);
        rep.u_bar = rep.varsigma = UeTable<double>(L, K);
        rep.unbounded = UeTable<char>(L, K, 0);
        rep.xi = rep.mu = GainTable(L, K);

        UeTable<double> t(L, K); // [T~_l]_kk
        for (int l = 0; l < L; ++l)
        {
            const auto &f = fp[l];
            if (!(f.Delta > 0.0))
            {
                std::ostringstream msg;
                msg << "Delta of cell " << l << " is not positive (" << f.Delta << ")";
                throw convergence_error(msg.str(), f.residual, f.iterations);
            }
            const double lam = f.lambda;
            const cmat &Tt = f.T_tilde;
            const cmat &G = s.los_gram(l);
            Eigen::VectorXd phi(K);
            for (int k = 0; k < K; ++k)
                phi(k) = s.phi(l, l, k);

            const cmat TGT = Tt * G * Tt;
            const cmat TPT = Tt * phi.asDiagonal() * Tt;
            const double one_dt = 1.0 + f.delta_tilde;
            rep.nu_bar.push_back(f.theta_aux / f.Delta);

            const double inv_norm = (lam * lam * f.theta_aux / f.Delta) * TPT.trace().real() / K +
                                    (1.0 - f.F) / (f.Delta * one_dt * one_dt) * TGT.trace().real() / K;
            // a cell whose estimates carry no energy transmits nothing
            rep.normalizer.push_back(inv_norm > 0.0 ? 1.0 / inv_norm : 0.0);

            for (int k = 0; k < K; ++k)
            {
                const double tk = Tt(k, k).real();
                t(l, k) = tk;
                rep.u_bar(l, k) = 1.0 / (lam * tk) - 1.0;
                rep.varsigma(l, k) = (1.0 - f.F) / f.Delta * TGT(k, k).real() / (lam * lam * tk * tk * one_dt * one_dt) +
                                     f.theta_aux / f.Delta * (TPT(k, k).real() / (tk * tk) - phi(k));
            }
        }

        const double n = N;
        for (int j = 0; j < L; ++j)
            for (int k = 0; k < K; ++k)
            {
                double total = 0.0, pc = 0.0;
                for (int l = 0; l < L; ++l)
                {
                    const double lam = fp[l].lambda;
                    const double dl = fp[l].delta;
                    const double tk = t(l, k);
                    const double nu = rep.nu_bar[l];
                    const double d = s.d(l, j, k);
                    const double ph = s.phi(l, j, k);
                    double xi, mu;
                    if (l != j)
                    {
                        xi = d * dl - lam * tk * (ph * dl) * (ph * dl);
                        mu = d * nu - ph * ph * dl * lam * tk * (2.0 * nu - dl * lam * tk * (s.phi(l, l, k) * nu + rep.varsigma(l, k)));
                        const double c = ph * dl / (1.0 + rep.u_bar(l, k));
                        pc += rep.normalizer[l] * c * c;
                    }
                    else
                    {
                        xi = dl * (d - ph) + 1.0 - lam * tk;
                        mu = nu * (d - ph * (1.0 - lam * lam * tk * tk)) + lam * lam * tk * tk * rep.varsigma(l, k);
                    }
                    rep.xi(l, j, k) = xi;
                    rep.mu(l, j, k) = mu;
                    total += rep.normalizer[l] * (xi - lam * mu);
                }
                const double u = rep.u_bar(j, k);
                const double ratio = u / (1.0 + u);
                const double num = rep.normalizer[j] * ratio * ratio;
                rep.numerator(j, k) = num;
                rep.contamination(j, k) = pc;
                rep.s_bar(j, k) = total - num - pc;
                rep.gamma(j, k) = num / (1.0 / (n * s.rho_dl()) + rep.s_bar(j, k) + pc);
            }
        return rep;
    }

    DetEquivReport rzf_det_sinr(const Scenario &scenario, const FixedPointOptions &options)
    {
        const auto fp = solve_all_fixed_points(scenario, options);
        return rzf_det_sinr(scenario, fp);
    }

    RateReport to_rate_report(const DetEquivReport &rep)
    {
        RateReport out;
        out.provenance = rep.provenance;
        out.scheme = rep.scheme;
        out.L = rep.L;
        out.K = rep.K;
        for (int j = 0; j < rep.L; ++j)
            for (int k = 0; k < rep.K; ++k)
            {
                UeRate ue;
                ue.cell = j;
                ue.ue = k;
                ue.sinr = rep.gamma(j, k);
                ue.signal_power = rep.numerator(j, k);
                ue.interference_power = rep.s_bar(j, k) + rep.contamination(j, k);
                ue.unbounded = rep.unbounded(j, k) != 0;
                out.ues.push_back(ue);
            }
        return ergodic_rates(std::move(out));
    }
}
