#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace qsr {

// Worker count from QSR_WORKERS, falling back to hardware concurrency.
int worker_count();

// Runs fn(begin, end, worker) over contiguous shards of [0, n). Shard
// boundaries depend only on n and the worker count; callers that need
// worker-count-independent results must make per-index work self-seeding.
void parallel_for(uint64_t n, const std::function<void(uint64_t, uint64_t, int)>& fn);

}  // namespace qsr
