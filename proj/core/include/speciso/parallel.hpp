#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace speciso {

// Worker cap honoured by the few loops that bother with threads.
// SPECISO_THREADS=N overrides the hardware count; values < 1 mean 1.
inline int worker_count() {
    if (const char* env = std::getenv("SPECISO_THREADS")) {
        try {
            int n = std::stoi(env);
            return n < 1 ? 1 : n;
        } catch (...) {
            return 1;
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Static block split of [0, n) over worker_count() threads. The body must be
// safe to run concurrently on disjoint indices; results must not depend on
// the split so output stays identical for any thread count.
template <typename F>
void parallel_for(long n, F&& body) {
    int workers = worker_count();
    if (workers <= 1 || n < 256) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    if (workers > n) workers = static_cast<int>(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    long chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        long lo = w * chunk;
        long hi = lo + chunk < n ? lo + chunk : n;
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (long i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace speciso
