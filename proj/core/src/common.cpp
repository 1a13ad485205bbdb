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

#include "rician/common.hpp"

namespace rician
{
    std::string_view to_string(Scheme s)
    {
        return s == Scheme::mrt ? "mrt" : "rzf";
    }

    Scheme parse_scheme(std::string_view s)
    {
        if (s == "mrt" || s == "MRT")
            return Scheme::mrt;
        if (s == "rzf" || s == "RZF")
            return Scheme::rzf;
        throw config_error("unknown precoding scheme '" + std::string(s) + "'");
    }
}
