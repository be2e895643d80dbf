#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace suco {

// Library code never spawns unmanaged background work: callers hand every
// operation an explicit thread budget (0 = hardware concurrency).
inline unsigned effective_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Partitions [0, count) into fixed-size chunks and runs
// fn(chunk_index, begin, end) for each. Chunk boundaries depend only on
// `count` and `chunk_size`, never on the worker count, so per-chunk partial
// results can be combined in chunk order to give results that are identical
// for any thread budget.
template <typename Fn>
void parallel_chunks(std::size_t count, unsigned threads, std::size_t chunk_size, Fn&& fn) {
    if (count == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    const std::size_t num_chunks = (count + chunk_size - 1) / chunk_size;
    const unsigned workers = std::min<std::size_t>(effective_threads(threads), num_chunks);

    if (workers <= 1) {
        for (std::size_t c = 0; c < num_chunks; ++c) {
            const std::size_t lo = c * chunk_size;
            const std::size_t hi = std::min(count, lo + chunk_size);
            fn(c, lo, hi);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= num_chunks || failed.load(std::memory_order_relaxed)) return;
            const std::size_t lo = c * chunk_size;
            const std::size_t hi = std::min(count, lo + chunk_size);
            try {
                fn(c, lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline std::size_t chunk_count(std::size_t count, std::size_t chunk_size) {
    if (count == 0) return 0;
    if (chunk_size == 0) chunk_size = 1;
    return (count + chunk_size - 1) / chunk_size;
}

}  // namespace suco
