#pragma once

// Chunked parallel-for. Work items must be independent; results are
// combined by the caller in deterministic (chunk-index) order.

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace klsieve {

inline unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// f(worker_index, begin, end) over [begin, end) split into contiguous chunks
template <typename F>
void parallel_chunks(std::size_t begin, std::size_t end, F&& f, unsigned workers = 0) {
    if (workers == 0) workers = default_workers();
    const std::size_t n = end > begin ? end - begin : 0;
    if (n == 0) return;
    if (workers <= 1 || n < 2) {
        f(0u, begin, end);
        return;
    }
    if (std::size_t(workers) > n) workers = unsigned(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = begin + w * chunk;
        if (lo >= end) break;
        const std::size_t hi = std::min(end, lo + chunk);
        pool.emplace_back([&f, w, lo, hi] { f(w, lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace klsieve
