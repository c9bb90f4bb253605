#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace absa {

/// Evaluates fn(0..n-1) into a vector using up to `workers` threads. Slot j
/// depends only on j, so the result is identical for any worker count. The
/// first exception thrown by any task is rethrown after all threads join.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, int workers, Fn&& fn) {
    std::vector<T> out(n);
    int use = std::max(1, std::min<int>(workers, static_cast<int>(n)));
    if (use == 1) {
        for (std::size_t j = 0; j < n; ++j) out[j] = fn(j);
        return out;
    }
    std::vector<std::thread> threads;
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::size_t chunk = (n + static_cast<std::size_t>(use) - 1) / static_cast<std::size_t>(use);
    for (int t = 0; t < use; ++t) {
        std::size_t begin = static_cast<std::size_t>(t) * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&, begin, end] {
            try {
                for (std::size_t j = begin; j < end; ++j) out[j] = fn(j);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

}  // namespace absa
