#include "qsr/parallel.hpp"

#include <cstdlib>
#include <string>

namespace qsr {

int worker_count() {
    if (const char* env = std::getenv("QSR_WORKERS")) {
        int w = std::atoi(env);
        if (w >= 1) return w;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

void parallel_for(uint64_t n, const std::function<void(uint64_t, uint64_t, int)>& fn) {
    int workers = worker_count();
    if (workers <= 1 || n < 2) {
        fn(0, n, 0);
        return;
    }
    uint64_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        uint64_t begin = w * chunk;
        uint64_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace qsr
