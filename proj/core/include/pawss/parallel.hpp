#ifndef PAWSS_PARALLEL_HPP
#define PAWSS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace pawss {

/// Worker count: hardware concurrency capped by the PAWSS_THREADS
/// environment variable (1 disables threading).
int worker_count();

/// Runs fn(i) for i in [0, n). Iterations must be independent; results
/// written by index stay deterministic regardless of thread count.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace pawss

#endif
