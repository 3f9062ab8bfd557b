#pragma once

// Deterministic slot-filling parallel loop.  Thread count comes from the
// RMT_THREADS environment variable (default: hardware concurrency).  Work is
// pre-partitioned into contiguous chunks and every task writes only its own
// output slots, so results are bit-identical for any thread count.

#include <cstdlib>
#include <thread>
#include <vector>

namespace rmt {

inline int thread_count() {
    if (const char* env = std::getenv("RMT_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? (int)hc : 1;
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    int nt = thread_count();
    if (nt <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t chunk = (n + nt - 1) / (std::size_t)nt;
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) {
        std::size_t lo = (std::size_t)t * chunk;
        if (lo >= n) break;
        std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace rmt
