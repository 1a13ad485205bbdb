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

#ifndef RICIAN_PARALLEL_HPP
#define RICIAN_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rician
{
    /// Resolves a worker count: 0 means hardware concurrency.
    inline unsigned resolve_workers(unsigned requested)
    {
        if (requested != 0)
            return requested;
        return std::max(1u, std::thread::hardware_concurrency());
    }

    /// Calls fn(i) for i in [0, n). Work items are claimed dynamically; callers write results
    /// into index-addressed slots so the outcome does not depend on scheduling. The first
    /// exception thrown by any item is rethrown on the calling thread.
    template <typename Fn>
    void parallel_for(std::size_t n, unsigned workers, Fn &&fn)
    {
        workers = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto body = [&]
        {
            for (std::size_t i; (i = next.fetch_add(1)) < n;)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = n;
                }
            }
        };
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 1; w < workers; ++w)
                pool.emplace_back(body);
            body();
        }
        if (error)
            std::rethrow_exception(error);
    }
}

#endif
