#pragma once

#include <cstddef>
#include <functional>

namespace levy_restock {

// Worker count: LEVY_RESTOCK_THREADS if set and positive, else the hardware count.
unsigned worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index is
// handled exactly once, so results written by index do not depend on scheduling.
// The first exception thrown by a worker is rethrown after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace levy_restock
