#pragma once
// Minimal fork-join helper. HAJLASZ_LAB_THREADS overrides the worker count,
// which otherwise defaults to the number of hardware threads.

#include <cstddef>
#include <functional>

namespace hajlasz {

std::size_t thread_count();

// Calls fn(i) for i in [0, n). Work items are claimed dynamically; the first
// exception thrown by any item is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hajlasz
