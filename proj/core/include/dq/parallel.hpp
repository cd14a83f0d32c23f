#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dq {

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index owns
// its own result slot, so outputs are identical for any thread count; workers
// take contiguous stripes to keep the order of work within a thread stable.
template <typename Body>
void parallel_for(size_t count, int threads, Body&& body) {
    if (count == 0) return;
    size_t workers = threads <= 1 ? 1 : static_cast<size_t>(threads);
    workers = std::min(workers, count);
    if (workers == 1) {
        for (size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const size_t stripe = (count + workers - 1) / workers;
    std::exception_ptr first_error = nullptr;
    std::mutex err_mu;
    for (size_t w = 0; w < workers; ++w) {
        const size_t lo = w * stripe, hi = std::min(count, lo + stripe);
        pool.emplace_back([&, lo, hi] {
            try {
                for (size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace dq
