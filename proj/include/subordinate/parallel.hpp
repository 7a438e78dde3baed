#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace subordinate {

/// Worker count: SUBORDINATE_THREADS if set and positive, else hardware concurrency.
inline unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SUBORDINATE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return n;
}

/// Runs body(i) for i in [0, count) on contiguous chunks across workers.
/// body must only write to per-replicate slots; results are then reduced
/// serially by the caller, so output does not depend on the worker count.
template <class Body>
void for_each_replicate(std::size_t count, Body body) {
    const std::size_t workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        threads.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace subordinate
