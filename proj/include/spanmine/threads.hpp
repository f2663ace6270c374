#pragma once

#include <cstddef>
#include <functional>

namespace spanmine {

/// Worker count for parallel loops: hardware concurrency, capped by SPANMINE_THREADS when set.
std::size_t worker_threads();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = worker_threads()).
/// Work is split into contiguous chunks; the first exception (lowest index) is rethrown.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace spanmine
