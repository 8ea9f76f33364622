#pragma once

#include <cstddef>
#include <functional>

namespace taskprune {

// Worker count used by parallel loops. TASKPRUNE_THREADS caps
// hardware_concurrency; always at least 1. Read fresh on every call so
// subprocess-driven tests can vary it.
std::size_t worker_count();

// Runs fn(begin, end) over contiguous chunks of [0, n). Callers compute each
// element independently and write to disjoint locations, so the result is
// invariant to the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace taskprune
