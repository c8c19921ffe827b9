#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace spartsm {

// Worker cap shared by all parallel loops. 0 means hardware concurrency.
// The CLI sets this from --threads / SPARTSM_THREADS.
inline int& max_threads() {
    static int value = 0;
    return value;
}

inline int effective_threads(std::size_t items) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int cap = max_threads() > 0 ? max_threads() : hw;
    return static_cast<int>(std::min<std::size_t>(items, static_cast<std::size_t>(cap)));
}

// Runs fn(i) for i in [0, count). Each item must be independent and write
// only to its own output slot; outputs are then identical for any thread
// count. Exceptions are captured and the first one rethrown.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    int nthreads = effective_threads(count);
    if (count == 0) return;
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int tid = 0; tid < nthreads; ++tid) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace spartsm
