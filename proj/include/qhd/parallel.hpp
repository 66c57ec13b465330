#pragma once

#include <cstddef>
#include <functional>

namespace qhd {

/// Worker count: QHD_THREADS when set to a positive integer, else hardware concurrency.
unsigned default_threads();

/// Runs body(i) for i in [0, count) on up to `threads` workers (0: default_threads()).
/// Indices are claimed dynamically; the first exception is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, unsigned threads = 0);

}  // namespace qhd
