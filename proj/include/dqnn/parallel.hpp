#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dqnn {

/// 0 => all hardware threads.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Items [0, n) are processed in fixed-size chunks; workers pull chunk indices
/// from a shared counter and call fn(chunk_index, begin, end). Chunk
/// boundaries depend only on `chunk_size`, never on the worker count, so
/// per-chunk outputs (reduced by the caller in chunk order) make results
/// independent of the thread count.
inline void parallel_for_chunks(
    std::size_t n, int threads, std::size_t chunk_size,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    const std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
    const int n_workers =
        static_cast<int>(std::min<std::size_t>(resolve_threads(threads), n_chunks));

    if (n_workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
        return;
    }

    std::atomic<std::size_t> next_chunk{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t c = next_chunk.fetch_add(1);
            if (c >= n_chunks || failed.load(std::memory_order_relaxed)) return;
            try {
                fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Chunk granularity for per-sample work; fixed so that reductions are
/// bit-identical for any thread count.
inline constexpr std::size_t kSampleChunk = 16;

} // namespace dqnn
