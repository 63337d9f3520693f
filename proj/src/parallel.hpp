#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

#include "nonsig/boundary_scan.hpp"

namespace nonsig::detail {

// Runs body(k) for k in [0, n) on worker_count() threads. Each index is
// claimed exactly once; the body must only touch state owned by its index.
template <typename F>
void parallel_for(int n, F&& body) {
    const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max(n, 1)));
    if (workers <= 1) {
        for (int k = 0; k < n; ++k) body(k);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int k = next++; k < n; k = next++) body(k);
        });
    }
}

}  // namespace nonsig::detail
