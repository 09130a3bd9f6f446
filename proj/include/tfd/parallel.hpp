#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tfd {

// Worker count for grid evaluation; overridable via TFD_WORKERS only.
inline int worker_count() {
    if (const char* env = std::getenv("TFD_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

// Deterministic parallel map over [0, count): each index is computed
// independently, so the result does not depend on the partition. The first
// exception thrown by any worker is rethrown on the calling thread.
inline void parallel_for(long count, const std::function<void(long)>& body) {
    const int workers = worker_count();
    if (workers <= 1 || count < 2 * workers) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::atomic<bool> failed{false};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (long i = w; i < count && !failed.load(std::memory_order_relaxed); i += workers)
                    body(i);
            } catch (...) {
                std::scoped_lock lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace tfd
