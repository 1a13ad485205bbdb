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

#ifndef RICIAN_COMMON_HPP
#define RICIAN_COMMON_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rician
{
    using cdouble = std::complex<double>;
    using cvec = Eigen::VectorXcd;
    using cmat = Eigen::MatrixXcd;

    enum class Scheme
    {
        mrt,
        rzf
    };

    std::string_view to_string(Scheme s);
    Scheme parse_scheme(std::string_view s);

    /// Invalid or inconsistent scenario / sweep input.
    class config_error : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    /// A Monte Carlo estimate whose SINR denominator came out non-positive.
    class instability_error : public std::runtime_error
    {
    public:
        instability_error(const std::string &what, std::string diagnostics)
            : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
        const std::string &diagnostics() const noexcept { return diagnostics_; }

    private:
        std::string diagnostics_;
    };

    /// Fixed-point solver failure: no convergence within the iteration budget,
    /// or a converged point with a non-positive Delta.
    class convergence_error : public std::runtime_error
    {
    public:
        convergence_error(const std::string &what, double residual, int iterations)
            : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
        double residual() const noexcept { return residual_; }
        int iterations() const noexcept { return iterations_; }

    private:
        double residual_;
        int iterations_;
    };

    /// A closed-form limit was requested on a scenario that does not satisfy its premise.
    class premise_error : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

    /// Dense (j, l, k) table of real coefficients: j is the BS, l the cell of the UE, k the UE index.
    class GainTable
    {
    public:
        GainTable() = default;
        GainTable(int L, int K, double fill = 0.0)
            : L_(L), K_(K), data_(static_cast<std::size_t>(L) * L * K, fill) {}

        double &operator()(int j, int l, int k) { return data_[index(j, l, k)]; }
        double operator()(int j, int l, int k) const { return data_[index(j, l, k)]; }

        int cells() const { return L_; }
        int users() const { return K_; }
        const std::vector<double> &data() const { return data_; }

        friend bool operator==(const GainTable &, const GainTable &) = default;

    private:
        std::size_t index(int j, int l, int k) const
        {
            return (static_cast<std::size_t>(j) * L_ + l) * K_ + k;
        }

        int L_ = 0;
        int K_ = 0;
        std::vector<double> data_;
    };

    /// Per-UE (j, k) table, row-major in j.
    template <typename T>
    class UeTable
    {
    public:
        UeTable() = default;
        UeTable(int L, int K, T fill = T{}) : L_(L), K_(K), data_(static_cast<std::size_t>(L) * K, fill) {}

        T &operator()(int j, int k) { return data_[static_cast<std::size_t>(j) * K_ + k]; }
        const T &operator()(int j, int k) const { return data_[static_cast<std::size_t>(j) * K_ + k]; }

        int cells() const { return L_; }
        int users() const { return K_; }
        std::size_t size() const { return data_.size(); }
        const std::vector<T> &data() const { return data_; }

    private:
        int L_ = 0;
        int K_ = 0;
        std::vector<T> data_;
    };

    // Neumaier compensated sum.
    class CompensatedSum
    {
    public:
        void add(double x)
        {
            const double t = sum_ + x;
            if (std::abs(sum_) >= std::abs(x))
                c_ += (sum_ - t) + x;
            else
                c_ += (x - t) + sum_;
            sum_ = t;
        }
        double value() const { return sum_ + c_; }

    private:
        double sum_ = 0.0;
        double c_ = 0.0;
    };
}

#endif
