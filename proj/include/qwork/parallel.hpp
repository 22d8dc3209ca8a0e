#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace qwork {

/// Worker count for sweeps: hardware concurrency, capped by the
/// QWORK_THREADS environment variable and by the number of jobs.
inline unsigned worker_count(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("QWORK_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1 && static_cast<unsigned long>(cap) < n)
                n = static_cast<unsigned>(cap);
        } catch (const std::exception&) {
            // unparsable value: ignore and keep the hardware count
        }
    }
    if (jobs < n) n = static_cast<unsigned>(jobs);
    return n > 0 ? n : 1;
}

/// Run f(0..n-1) on a worker pool. Results must be written by index so the
/// outcome is independent of scheduling. The first exception wins and is
/// rethrown after all workers join.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
    if (n == 0) return;
    const unsigned workers = worker_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                break;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace qwork
