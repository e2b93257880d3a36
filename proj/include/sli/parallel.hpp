#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace sli {

// Worker count: SLI_WORKERS env var, default 1. Results never depend on
// it; work item i always uses the RNG stream derived from (seed, i) and
// writes into slot i.
inline int worker_count() {
    if (const char* env = std::getenv("SLI_WORKERS")) {
        int w = std::atoi(env);
        if (w >= 1 && w <= 256) return w;
    }
    return 1;
}

// Runs fn(i) for i in [0, n); fn must only touch state owned by index i.
inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
    int workers = worker_count();
    if (workers <= 1 || n < 2 * workers) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    std::int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        std::int64_t lo = w * chunk;
        std::int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : threads) t.join();
}

}  // namespace sli
