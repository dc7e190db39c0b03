#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

#include "selfnorm/rng.hpp"

namespace selfnorm {

struct EngineOptions {
    unsigned workers = 0;  // 0 = one per hardware thread
};

inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw != 0 ? hw : 1;
}

// Runs fn(rng, rep) for rep in [0, reps) and collects the results in
// replication order.  Replication r always draws from stream_base + r of the
// master seed and lands in slot r, so the output is byte-for-byte identical
// for any worker count.  The first exception wins and is rethrown after the
// pool drains.
template <class Fn>
auto replicate(std::uint64_t reps, std::uint64_t master_seed, std::uint64_t stream_base,
               Fn&& fn, const EngineOptions& opts = {})
    -> std::vector<std::invoke_result_t<Fn&, RngStream&, std::uint64_t>> {
    using T = std::invoke_result_t<Fn&, RngStream&, std::uint64_t>;
    std::vector<T> out(reps);
    if (reps == 0) return out;

    const std::uint64_t workers = std::min<std::uint64_t>(resolve_workers(opts.workers), reps);
    if (workers <= 1) {
        for (std::uint64_t rep = 0; rep < reps; ++rep) {
            RngStream rng(master_seed, stream_base + rep);
            out[rep] = fn(rng, rep);
        }
        return out;
    }

    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto body = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::uint64_t rep = next.fetch_add(1, std::memory_order_relaxed);
            if (rep >= reps) break;
            try {
                RngStream rng(master_seed, stream_base + rep);
                out[rep] = fn(rng, rep);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

// Disjoint stream id ranges for the independent arms of one experiment.
inline constexpr std::uint64_t arm_stream_base(std::uint64_t arm) { return arm << 40; }

}  // namespace selfnorm
