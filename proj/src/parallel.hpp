// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace litefocus {

// Runs fn(begin, end) over contiguous chunks of [0, n). Every chunk writes
// disjoint output and does its own reductions, so results are bitwise
// independent of the worker count.
inline void parallel_for(int threads, size_t n,
                         const std::function<void(size_t, size_t)>& fn) {
    if (n == 0) return;
    const size_t workers = (threads <= 1) ? 1 : std::min<size_t>(size_t(threads), n);
    if (workers == 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const size_t chunk = (n + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
        const size_t begin = w * chunk;
        const size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace litefocus
