#pragma once

#include <cstddef>
#include <functional>

namespace disclose {

// Worker count: DISCLOSE_EQ_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, count) on up to `threads` workers (0 = worker_count()).
// Exceptions from body are rethrown on the calling thread (first by index).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, unsigned threads = 0);

} // namespace disclose
