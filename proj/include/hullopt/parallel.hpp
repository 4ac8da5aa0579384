#pragma once

// Deterministic parallel map over an index range: results land in slots
// keyed by index, so the output is independent of thread scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hullopt {

inline unsigned default_thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn, unsigned n_threads = 0) {
    if (n_threads == 0) n_threads = default_thread_count();
    std::vector<T> results(count);
    if (count == 0) return results;
    if (n_threads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }

    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) break;
            try {
                results[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                break;
            }
        }
    };

    std::vector<std::thread> threads;
    const unsigned spawn = static_cast<unsigned>(
        std::min<std::size_t>(n_threads, count));
    threads.reserve(spawn);
    for (unsigned t = 0; t < spawn; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

}  // namespace hullopt
