// Minimal deterministic parallel-for over sample indices.
#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace copoly {

/// Run f(i) for i in [0, n). Each index owns its RNG stream and output slot,
/// so the result is identical for every worker count.
template <class F>
void parallel_for(std::int64_t n, int workers, F&& f) {
    if (workers <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        workers = hc == 0 ? 1 : static_cast<int>(hc);
    }
    workers = static_cast<int>(std::min<std::int64_t>(workers, std::max<std::int64_t>(n, 1)));
    if (workers == 1) {
        for (std::int64_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = n * w / workers;
        const std::int64_t hi = n * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::int64_t i = lo; i < hi; ++i) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace copoly
