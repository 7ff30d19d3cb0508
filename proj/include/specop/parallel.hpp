#pragma once

#include <functional>

namespace specop {

// Runs fn(i) for i in [0, n) on `workers` threads (0 = hardware concurrency).
// Each index writes only its own output slot, so the result is identical for
// any worker count; only the wall time changes. fn must not throw across the
// thread boundary with state worth keeping: the first exception is rethrown
// on the calling thread after all workers join.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace specop
