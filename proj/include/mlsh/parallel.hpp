#pragma once

#include <cstddef>
#include <functional>

namespace mlsh {

/// Worker count used when the caller passes 0.
unsigned defaultThreadCount();

/// Runs body(i) for every i in [0, count) on up to `threads` workers
/// (0 = defaultThreadCount()). Iterations must not depend on each other.
/// The first exception thrown by any iteration is rethrown on the caller.
void parallelFor(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace mlsh
