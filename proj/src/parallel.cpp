#include "vrs/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace vrs {

std::size_t configured_thread_count() {
    std::size_t n = 0;
    if (const char* env = std::getenv("VRS_SIM_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) n = static_cast<std::size_t>(v);
        } catch (...) {
            n = 0;
        }
    }
    if (n == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        n = hw > 0 ? hw : 1;
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t workers = std::min(configured_thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace vrs
