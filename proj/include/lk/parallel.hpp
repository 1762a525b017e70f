#ifndef LK_PARALLEL_HPP
#define LK_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace lk {

/// Number of worker threads: LK_SHARP_THREADS if set (0 = auto),
/// otherwise hardware concurrency.
int thread_count();

/// Runs fn(i) for i in [0, n).  Work is split into contiguous blocks; callers
/// store results by index so output order never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace lk

#endif
