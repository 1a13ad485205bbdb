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

#include "rician/random.hpp"


namespace rician
{
    std::uint64_t mix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t stream_seed(std::uint64_t seed, StreamTag tag, std::uint64_t index)
    {
        return mix64(mix64(mix64(seed) ^ static_cast<std::uint64_t>(tag)) + index);
    }

    double GaussianSource::uniform()
    {
        // (x + 1) * 2^-53 maps the top 53 bits onto (0, 1]
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    cdouble GaussianSource::complex_normal()
    {
        const double re = normal_(engine_);
        return {re, normal_(engine_)};
    }

    void GaussianSource::fill(cmat &m)
    {
        // column-major traversal keeps the draw order independent of storage options
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            for (Eigen::Index r = 0; r < m.rows(); ++r)
                m(r, c) = complex_normal();
    }
}
