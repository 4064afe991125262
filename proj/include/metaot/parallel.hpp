#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace metaot {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items are
/// handed out dynamically; callers write results into per-index slots so the
/// outcome never depends on scheduling. The first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (count == 0) return;
    unsigned workers = std::max(1u, threads);
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace metaot
