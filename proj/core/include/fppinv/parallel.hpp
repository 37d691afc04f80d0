#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fppinv {

/// Runs body(i) for i in [0, count) on `jobs` threads. Index i always goes to worker
/// i % jobs, so callers that key their randomness on i get job-count-independent results.
/// The first exception thrown by any body is rethrown after all workers finish.
template <class Body>
void parallel_for(std::int64_t count, int jobs, Body&& body) {
    jobs = std::max(1, std::min<int>(jobs, int(std::max<std::int64_t>(count, 1))));
    if (jobs == 1) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex mu;
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (std::int64_t i = w; i < count; i += jobs) body(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace fppinv
