#pragma once

#include <cstddef>
#include <functional>

namespace welfare {

/// Runs fn(i) for i in [0, n) on up to `threads` worker threads. Indices are
/// split into contiguous blocks; callers write results into slot i only, so
/// output never depends on scheduling. threads <= 1 runs inline.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Default worker count (hardware concurrency, at least 1).
int default_threads();

}  // namespace welfare
