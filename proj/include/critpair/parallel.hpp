#pragma once

#include <cstddef>
#include <functional>

namespace critpair {

/// Worker count: CRITPAIR_THREADS when set to a positive integer, otherwise
/// the number of logical cores (at least 1).
std::size_t worker_count();

/// Calls body(i) for i in [0, count) on up to `workers` threads. Indices are
/// handed out dynamically, so body must write only to its own slot. If any
/// call throws, the exception of the lowest failing index is rethrown after
/// all workers have stopped.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t workers = worker_count());

}  // namespace critpair
