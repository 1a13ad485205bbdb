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

#ifndef RICIAN_RANDOM_HPP
#define RICIAN_RANDOM_HPP

#include "rician/common.hpp"

#include <cstdint>
#include <cmath>
#include <random>

namespace rician
{
    /// Stream purposes. Each purpose gets an independent family of per-trial streams.
    enum class StreamTag : std::uint64_t
    {
        geometry = 1,
        normalizer = 2,
        montecarlo = 3,
        test = 99
    };

    /// SplitMix64 finalizer; derives well-separated 64-bit seeds.
    std::uint64_t mix64(std::uint64_t x);

    /// Seed of the stream (seed, tag, index), independent of worker count.
    std::uint64_t stream_seed(std::uint64_t seed, StreamTag tag, std::uint64_t index);

    /// Deterministic source of uniform and circularly-symmetric complex Gaussian draws.
    /// Gaussians use the Box-Muller transform on 53-bit uniforms from a 64-bit Mersenne
    /// twister, so results are reproducible across standard libraries.
    class GaussianSource
    {
    public:
        explicit GaussianSource(std::uint64_t seed) : seed_(seed), engine_(seed), normal_(0.0, std::sqrt(0.5)) {}

        std::uint64_t seed() const { return seed_; }

        /// Uniform on (0, 1].
        double uniform();

        /// Uniform on [lo, hi).
        double uniform(double lo, double hi) { return lo + (hi - lo) * (1.0 - uniform()); }

        /// CN(0, 1): real and imaginary parts each N(0, 1/2).
        cdouble complex_normal();

        /// Fills a matrix with i.i.d. CN(0, 1) entries.
        void fill(cmat &m);

    private:
        std::uint64_t seed_;
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_;
    };
}

#endif
