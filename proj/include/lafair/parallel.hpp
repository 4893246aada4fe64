// Minimal fork-join helper. Work is split into contiguous index ranges, one
// per worker; callers must only write to index-disjoint data so results are
// identical for any worker count.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace lafair {

// Worker cap from LA_FAIR_THREADS; unset or invalid means hardware default.
inline int worker_count() {
    if (const char* env = std::getenv("LA_FAIR_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 256L));
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

template <typename F>
void parallel_for(std::size_t n, F&& f) {
    std::size_t workers = static_cast<std::size_t>(worker_count());
    if (n < 256 || workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    workers = std::min(workers, n);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            std::size_t begin = n * w / workers;
            std::size_t end = n * (w + 1) / workers;
            try {
                for (std::size_t i = begin; i < end; ++i) f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace lafair
