#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace qtdlab {

/// Runs fn(k) for k in [0, count) on up to `jobs` threads. Work items must
/// write to disjoint slots; reductions over the slots stay deterministic
/// regardless of scheduling.
template <typename Fn>
void parallel_for(int jobs, std::size_t count, Fn&& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || count <= 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= count) return;
            fn(k);
        }
    };
    std::vector<std::thread> pool;
    const auto n_threads =
        static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), count));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

inline int hardware_jobs() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace qtdlab
