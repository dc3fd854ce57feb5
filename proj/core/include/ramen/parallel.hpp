#pragma once

#include <functional>

namespace ramen {

// Worker-pool size: RAMEN_THREADS if set, otherwise hardware concurrency.
int worker_count();

// Runs fn(0..n-1) over a chunked thread pool. Nested calls from inside a
// worker run serially, so callers never oversubscribe. The first exception
// thrown by any worker is rethrown on the calling thread after joining.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace ramen
