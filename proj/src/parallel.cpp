#include "taskprune/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace taskprune {

std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TASKPRUNE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) {
            n = std::min(n, static_cast<std::size_t>(v));
        }
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) {
        return;
    }
    const std::size_t workers = std::min(worker_count(), n);
    if (workers == 1) {
        fn(0, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    std::size_t begin = chunk;
    for (std::size_t w = 1; w < workers && begin < n; ++w, begin += chunk) {
        pool.emplace_back(fn, begin, std::min(begin + chunk, n));
    }
    fn(0, std::min(chunk, n));
    for (auto& t : pool) {
        t.join();
    }
}

}  // namespace taskprune
