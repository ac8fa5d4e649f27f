/*
   Copyright 2026 The maxmart Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace maxmart {

/// Worker count: `requested` if nonzero, else MAXMART_THREADS, else the
/// hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once; callers write results into slot i so the outcome
/// never depends on scheduling.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body)
{
    constexpr std::size_t kChunk = 64;
    const unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(resolve_threads(threads), (n + kChunk - 1) / kChunk));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            for (;;) {
                const std::size_t begin = next.fetch_add(kChunk);
                if (begin >= n) {
                    return;
                }
                const std::size_t end = std::min(n, begin + kChunk);
                for (std::size_t i = begin; i < end; ++i) {
                    body(i);
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next.store(n);
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (unsigned w = 1; w < workers; ++w) {
            pool.emplace_back(work);
        }
        work();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

/// results[i] = fn(i), computed in parallel.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, unsigned threads, Fn&& fn)
{
    std::vector<T> results(n);
    parallel_for(n, threads, [&](std::size_t i) { results[i] = fn(i); });
    return results;
}

} // namespace maxmart
