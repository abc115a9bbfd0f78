#pragma once

#include <cstddef>
#include <functional>

namespace bitune {

/// Worker count: BI_TUNE_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n) over up to worker_count() threads. Work items
/// must write only to their own slot; the first exception thrown by any item
/// is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bitune
