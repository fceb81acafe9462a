#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ticketclass {

// Runs fn(i) for i in [0, count) across a bounded worker pool. Tasks must be
// independent; results are written by index so the outcome does not depend on
// scheduling order.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                         std::size_t max_workers = 0) {
    if (max_workers == 0) {
        max_workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    if (count <= 1 || max_workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min(max_workers, count);
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace ticketclass
