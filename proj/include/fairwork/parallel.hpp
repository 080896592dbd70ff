#pragma once

#include <cstddef>
#include <functional>

namespace fairwork {

/// Worker count: FAIRWORK_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs fn(0..n-1), possibly on several threads. Exceptions are rethrown on the
/// caller's thread (the first one by index).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fairwork
