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

#include "rician/scenario.hpp"
#include "rician/random.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace rician
{
    std::string_view to_string(LosModel m)
    {
        switch (m)
        {
        case LosModel::ula:
            return "ula";
        case LosModel::dft_orthogonal:
            return "dft_orthogonal";
        case LosModel::explicit_vectors:
            return "explicit";
        }
        return "?";
    }

    std::string_view to_string(Geometry g)
    {
        return g == Geometry::triangle_default ? "triangle_default" : "explicit_positions";
    }

    double LambdaRule::resolve(int K, int N, double rho_dl_linear) const
    {
        if (k_over_n_rho)
            return static_cast<double>(K) / (static_cast<double>(N) * rho_dl_linear);
        return value;
    }

    void ScenarioConfig::validate() const
    {
        if (L < 1 || K < 1 || N < 1)
            throw config_error("L, K and N must all be at least 1");
        if (K >= N)
            throw config_error("K/N must be below 1 (got K=" + std::to_string(K) + ", N=" + std::to_string(N) + ")");
        if (!std::isfinite(pathloss_exponent) || pathloss_exponent < 0.0)
            throw config_error("pathloss_exponent must be finite and non-negative");
        if (!std::isfinite(rho_tr_db) || !std::isfinite(rho_dl_db))
            throw config_error("SNRs must be finite");
        if (kappa.size() != 1 && kappa.size() != static_cast<std::size_t>(L) * K)
            throw config_error("kappa must hold 1 or L*K values");
        for (double kap : kappa)
            if (!std::isfinite(kap) || kap < 0.0)
                throw config_error("Rician factors must be finite and non-negative");
        if (!lambda.k_over_n_rho && !(lambda.value > 0.0 && std::isfinite(lambda.value)))
            throw config_error("lambda must be positive");
        if (!(min_distance >= 0.0) || min_distance >= 1.0)
            throw config_error("min_distance must lie in [0, 1)");
        if (geometry == Geometry::triangle_default && L > 3)
            throw config_error("triangle_default geometry holds at most 3 cells; use explicit_positions");
        if (geometry == Geometry::explicit_positions)
        {
            if (bs_positions.size() != static_cast<std::size_t>(L))
                throw config_error("explicit_positions needs L BS positions");
            if (ue_positions.size() != static_cast<std::size_t>(L) * K)
                throw config_error("explicit_positions needs L*K UE positions");
        }
        if (los_model == LosModel::explicit_vectors)
        {
            if (explicit_los.size() != static_cast<std::size_t>(L) * K)
                throw config_error("explicit LOS model needs L*K direction vectors");
            for (const auto &a : explicit_los)
            {
                if (a.size() != N)
                    throw config_error("explicit LOS vectors must have length N");
                if (std::abs(a.squaredNorm() / N - 1.0) > 1e-9)
                    throw config_error("explicit LOS vectors must satisfy (1/N)||a||^2 = 1");
            }
        }
    }

    std::vector<Point> triangle_sites(int L)
    {
        const std::vector<Point> all{{0.0, 0.0}, {2.0, 0.0}, {1.0, std::sqrt(3.0)}};
        return {all.begin(), all.begin() + std::min(L, 3)};
    }

    cvec los_vector(int N, LosModel model, int k, double azimuth)
    {
        if (N < 1)
            throw config_error("los_vector: N must be at least 1");
        cvec a(N);
        switch (model)
        {
        case LosModel::ula:
        {
            const double s = std::sin(azimuth);
            for (int n = 0; n < N; ++n)
                a(n) = std::polar(1.0, std::numbers::pi * n * s);
            break;
        }
        case LosModel::dft_orthogonal:
        {
            if (k < 0 || k >= N)
                throw config_error("dft_orthogonal LOS needs K <= N");
            // reduce n*k mod N first so the phase stays exact for large products
            for (int n = 0; n < N; ++n)
            {
                const long long m = (static_cast<long long>(n) * k) % N;
                a(n) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m) / N);
            }
            break;
        }
        case LosModel::explicit_vectors:
            throw config_error("los_vector: explicit directions are supplied by the caller");
        }
        return a;
    }

    GainTable estimation_quality(const GainTable &d, double rho_tr)
    {
        if (!(rho_tr > 0.0))
            throw config_error("estimation_quality: rho_tr must be positive");
        const int L = d.cells(), K = d.users();
        GainTable phi(L, K);
        for (int j = 0; j < L; ++j)
            for (int k = 0; k < K; ++k)
            {
                double denom = 1.0 / rho_tr;
                for (int n = 0; n < L; ++n)
                    denom += d(j, n, k);
                for (int l = 0; l < L; ++l)
                    phi(j, l, k) = d(j, j, k) * d(j, l, k) / denom;
            }
        return phi;
    }

    namespace
    {
        void place_users(const ScenarioConfig &cfg, std::vector<Point> &bs, UeTable<Point> &ues)
        {
            ues = UeTable<Point>(cfg.L, cfg.K);
            if (cfg.geometry == Geometry::explicit_positions)
            {
                bs = cfg.bs_positions;
                for (int l = 0; l < cfg.L; ++l)
                    for (int k = 0; k < cfg.K; ++k)
                        ues(l, k) = cfg.ue_positions[static_cast<std::size_t>(l) * cfg.K + k];
                return;
            }
            bs = triangle_sites(cfg.L);
            GaussianSource rng(stream_seed(cfg.seed, StreamTag::geometry, 0));
            const double r0sq = cfg.min_distance * cfg.min_distance;
            for (int l = 0; l < cfg.L; ++l)
                for (int k = 0; k < cfg.K; ++k)
                {
                    // uniform in area over the annulus [min_distance, 1]
                    const double r = std::sqrt(r0sq + (1.0 - r0sq) * (1.0 - rng.uniform()));
                    const double ang = rng.uniform(0.0, 2.0 * std::numbers::pi);
                    ues(l, k) = {bs[l].x + r * std::cos(ang), bs[l].y + r * std::sin(ang)};
                }
        }

        double distance(const Point &a, const Point &b) { return std::hypot(a.x - b.x, a.y - b.y); }
    }

    void Scenario::finish()
    {
        const int L = config_.L, K = config_.K, N = config_.N;
        rho_tr_ = db_to_linear(config_.rho_tr_db);
        rho_dl_ = db_to_linear(config_.rho_dl_db);
        lambda_.assign(static_cast<std::size_t>(L), config_.lambda.resolve(K, N, rho_dl_));

        d_ = beta_;
        for (int j = 0; j < L; ++j)
            for (int k = 0; k < K; ++k)
                d_(j, j, k) = beta_(j, j, k) / (1.0 + config_.kappa_of(j, k));
        phi_ = estimation_quality(d_, rho_tr_);

        directions_ = UeTable<cvec>(L, K);
        los_matrix_.assign(static_cast<std::size_t>(L), cmat(N, K));
        los_gram_.assign(static_cast<std::size_t>(L), cmat(K, K));
        for (int j = 0; j < L; ++j)
        {
            for (int k = 0; k < K; ++k)
            {
                cvec a;
                if (config_.los_model == LosModel::explicit_vectors)
                {
                    a = config_.explicit_los[static_cast<std::size_t>(j) * K + k];
                    a *= std::sqrt(static_cast<double>(N)) / a.norm();
                }
                else
                {
                    const Point &u = ue_positions_(j, k);
                    const Point &b = bs_positions_[static_cast<std::size_t>(j)];
                    a = los_vector(N, config_.los_model, k, std::atan2(u.y - b.y, u.x - b.x));
                }
                directions_(j, k) = a;
                los_matrix_[j].col(k) = std::sqrt(d_(j, j, k) * config_.kappa_of(j, k)) * a;
            }
            los_gram_[j] = los_matrix_[j].adjoint() * los_matrix_[j] / static_cast<double>(N);
        }
    }

    double Scenario::los_spectral_norm(int j) const
    {
        Eigen::SelfAdjointEigenSolver<cmat> es(los_gram(j), Eigen::EigenvaluesOnly);
        return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    }

    Scenario build_scenario(const ScenarioConfig &config)
    {
        config.validate();
        Scenario s;
        s.config_ = config;
        place_users(config, s.bs_positions_, s.ue_positions_);
        const int L = config.L, K = config.K;
        s.beta_ = GainTable(L, K);
        for (int j = 0; j < L; ++j)
            for (int l = 0; l < L; ++l)
                for (int k = 0; k < K; ++k)
                {
                    const double x = distance(s.bs_positions_[j], s.ue_positions_(l, k));
                    if (!(x > 0.0))
                        throw config_error("UE co-located with a BS");
                    s.beta_(j, l, k) = std::pow(x, -config.pathloss_exponent);
                }
        s.finish();
        return s;
    }

    Scenario build_scenario_with_gains(const ScenarioConfig &config, const GainTable &beta)
    {
        config.validate();
        if (beta.cells() != config.L || beta.users() != config.K)
            throw config_error("gain table dimensions do not match the config");
        for (double b : beta.data())
            if (!(b >= 0.0) || !std::isfinite(b))
                throw config_error("gains must be finite and non-negative");
        Scenario s;
        s.config_ = config;
        place_users(config, s.bs_positions_, s.ue_positions_);
        s.beta_ = beta;
        s.finish();
        return s;
    }

    // ---------- config file ----------

    namespace
    {
        std::string_view trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        double parse_double(std::string_view key, std::string_view v)
        {
            v = trim(v);
            double out = 0.0;
            const auto *first = v.data(), *last = v.data() + v.size();
            if (!v.empty() && *first == '+')
                ++first;
            auto [ptr, ec] = std::from_chars(first, last, out);
            if (ec != std::errc() || ptr != last)
                throw config_error("key '" + std::string(key) + "': '" + std::string(v) + "' is not a number");
            return out;
        }

        long long parse_int(std::string_view key, std::string_view v)
        {
            v = trim(v);
            long long out = 0;
            auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (ec != std::errc() || ptr != v.data() + v.size())
                throw config_error("key '" + std::string(key) + "': '" + std::string(v) + "' is not an integer");
            return out;
        }

        std::vector<double> parse_list(std::string_view key, std::string_view v)
        {
            std::vector<double> out;
            while (true)
            {
                const auto comma = v.find(',');
                out.push_back(parse_double(key, v.substr(0, comma)));
                if (comma == std::string_view::npos)
                    break;
                v.remove_prefix(comma + 1);
            }
            return out;
        }

        std::vector<Point> parse_points(std::string_view key, std::string_view v)
        {
            const auto flat = parse_list(key, v);
            if (flat.size() % 2 != 0)
                throw config_error("key '" + std::string(key) + "' needs x,y pairs");
            std::vector<Point> pts;
            for (std::size_t i = 0; i < flat.size(); i += 2)
                pts.push_back({flat[i], flat[i + 1]});
            return pts;
        }

        int to_dim(std::string_view key, long long v)
        {
            if (v < 1 || v > 1'000'000)
                throw config_error("key '" + std::string(key) + "' out of range");
            return static_cast<int>(v);
        }
    }

    ScenarioConfig parse_scenario_config(std::string_view text, bool validate)
    {
        static const std::set<std::string, std::less<>> required{
            "L", "K", "N", "pathloss_exponent", "rho_tr_db", "rho_dl_db", "kappa",
            "lambda_rule", "los_model", "geometry", "min_distance", "seed"};
        static const std::set<std::string, std::less<>> optional{"bs_positions", "ue_positions"};

        std::map<std::string, std::string, std::less<>> kv;
        int line_no = 0;
        std::istringstream in{std::string(text)};
        for (std::string raw; std::getline(in, raw);)
        {
            ++line_no;
            std::string_view line = raw;
            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw config_error("line " + std::to_string(line_no) + ": expected 'key = value'");
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (!required.contains(key) && !optional.contains(key))
                throw config_error("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
            if (value.empty())
                throw config_error("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
            if (!kv.emplace(key, value).second)
                throw config_error("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        for (const auto &key : required)
            if (!kv.contains(key))
                throw config_error("missing key '" + key + "'");

        ScenarioConfig c;
        c.L = to_dim("L", parse_int("L", kv["L"]));
        c.K = to_dim("K", parse_int("K", kv["K"]));
        c.N = to_dim("N", parse_int("N", kv["N"]));
        c.pathloss_exponent = parse_double("pathloss_exponent", kv["pathloss_exponent"]);
        c.rho_tr_db = parse_double("rho_tr_db", kv["rho_tr_db"]);
        c.rho_dl_db = parse_double("rho_dl_db", kv["rho_dl_db"]);
        c.kappa = parse_list("kappa", kv["kappa"]);
        if (kv["lambda_rule"] == "k_over_n_rho")
            c.lambda = LambdaRule::k_over_n_rho_rule();
        else
            c.lambda = LambdaRule::fixed(parse_double("lambda_rule", kv["lambda_rule"]));

        const std::string &los = kv["los_model"];
        if (los == "ula")
            c.los_model = LosModel::ula;
        else if (los == "dft_orthogonal")
            c.los_model = LosModel::dft_orthogonal;
        else if (los == "explicit")
            throw config_error("los_model 'explicit' needs direction vectors and is only available through the library API");
        else
            throw config_error("unknown los_model '" + los + "'");

        const std::string &geo = kv["geometry"];
        if (geo == "triangle_default")
            c.geometry = Geometry::triangle_default;
        else if (geo == "explicit_positions")
            c.geometry = Geometry::explicit_positions;
        else
            throw config_error("unknown geometry '" + geo + "'");

        c.min_distance = parse_double("min_distance", kv["min_distance"]);
        {
            const std::string_view v = trim(kv["seed"]);
            std::uint64_t seed = 0;
            auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
            if (ec != std::errc() || ptr != v.data() + v.size())
                throw config_error("key 'seed': '" + std::string(v) + "' is not a 64-bit unsigned integer");
            c.seed = seed;
        }
        if (kv.contains("bs_positions"))
            c.bs_positions = parse_points("bs_positions", kv["bs_positions"]);
        if (kv.contains("ue_positions"))
            c.ue_positions = parse_points("ue_positions", kv["ue_positions"]);

        if (validate)
            c.validate();
        return c;
    }

    ScenarioConfig load_scenario_config(const std::filesystem::path &path, bool validate)
    {
        std::ifstream in(path);
        if (!in)
            throw config_error("cannot open config file '" + path.string() + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_scenario_config(ss.str(), validate);
    }

    std::string format_scenario_config(const ScenarioConfig &c)
    {
        std::ostringstream out;
        out.precision(17);
        out << "L = " << c.L << "\nK = " << c.K << "\nN = " << c.N
            << "\npathloss_exponent = " << c.pathloss_exponent
            << "\nrho_tr_db = " << c.rho_tr_db << "\nrho_dl_db = " << c.rho_dl_db << "\nkappa = ";
        for (std::size_t i = 0; i < c.kappa.size(); ++i)
            out << (i ? "," : "") << c.kappa[i];
        out << "\nlambda_rule = ";
        if (c.lambda.k_over_n_rho)
            out << "k_over_n_rho";
        else
            out << c.lambda.value;
        out << "\nlos_model = " << to_string(c.los_model) << "\ngeometry = " << to_string(c.geometry)
            << "\nmin_distance = " << c.min_distance << "\nseed = " << c.seed << "\n";
        auto points = [&](const char *key, const std::vector<Point> &pts)
        {
            if (pts.empty())
                return;
            out << key << " = ";
            for (std::size_t i = 0; i < pts.size(); ++i)
                out << (i ? "," : "") << pts[i].x << "," << pts[i].y;
            out << "\n";
        };
        points("bs_positions", c.bs_positions);
        points("ue_positions", c.ue_positions);
        return out.str();
    }
}
