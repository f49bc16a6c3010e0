#pragma once

#include <cstddef>
#include <functional>

namespace decompound {

// Worker count from DECOMPOUND_THREADS, defaulting to the hardware
// concurrency (at least 1).
std::size_t worker_count();

// Runs fn(i) for i in [0, n) on up to `workers` threads with static
// contiguous chunks. The first exception thrown is rethrown after all
// workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  std::size_t workers = worker_count());

}  // namespace decompound
