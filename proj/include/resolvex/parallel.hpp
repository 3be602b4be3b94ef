#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace resolvex {

namespace detail {

// Runs `worker` on every pool thread; the first exception thrown inside any
// worker is captured and rethrown on the calling thread after the join.
template <typename Worker>
void run_pool(unsigned nthreads, Worker worker) {
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto guarded = [&]() {
        try {
            worker();
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(guarded);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace detail

// Thread budget: RESOLVEX_THREADS overrides hardware_concurrency.
inline unsigned thread_budget() {
    if (const char* env = std::getenv("RESOLVEX_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

// Deterministic chunked map-reduce: the index range is cut into fixed-size
// chunks (independent of thread count), each chunk is reduced sequentially,
// and chunk results are combined in index order. Output is therefore
// bit-identical for any number of threads.
//
// ChunkFn: R(uint64_t begin, uint64_t end)
// CombineFn: R(R, R)
template <typename R, typename ChunkFn, typename CombineFn>
R chunked_reduce(std::uint64_t n, R identity, ChunkFn chunk_fn, CombineFn combine,
                 std::uint64_t chunk_size = 1 << 14) {
    if (n == 0) return identity;
    const std::uint64_t nchunks = (n + chunk_size - 1) / chunk_size;
    std::vector<R> partial(nchunks, identity);

    unsigned nthreads = thread_budget();
    if (nthreads > nchunks) nthreads = static_cast<unsigned>(nchunks);

    if (nthreads <= 1) {
        for (std::uint64_t c = 0; c < nchunks; ++c) {
            std::uint64_t b = c * chunk_size;
            std::uint64_t e = b + chunk_size < n ? b + chunk_size : n;
            partial[c] = chunk_fn(b, e);
        }
    } else {
        std::atomic<std::uint64_t> next{0};
        detail::run_pool(nthreads, [&]() {
            for (;;) {
                std::uint64_t c = next.fetch_add(1);
                if (c >= nchunks) return;
                std::uint64_t b = c * chunk_size;
                std::uint64_t e = b + chunk_size < n ? b + chunk_size : n;
                partial[c] = chunk_fn(b, e);
            }
        });
    }

    R acc = identity;
    for (std::uint64_t c = 0; c < nchunks; ++c) acc = combine(acc, partial[c]);
    return acc;
}

// Parallel map over [0,n) with disjoint writes; body(i) must not touch shared state.
template <typename Fn>
void parallel_for(std::uint64_t n, Fn body, std::uint64_t grain = 64) {
    unsigned nthreads = thread_budget();
    if (nthreads <= 1 || n < 2 * grain) {
        for (std::uint64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    detail::run_pool(nthreads, [&]() {
        for (;;) {
            std::uint64_t b = next.fetch_add(grain);
            if (b >= n) return;
            std::uint64_t e = b + grain < n ? b + grain : n;
            for (std::uint64_t i = b; i < e; ++i) body(i);
        }
    });
}

} // namespace resolvex
