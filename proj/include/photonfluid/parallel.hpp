#pragma once

#include <cstddef>
#include <functional>

namespace photonfluid {

/// Worker count: PHOTONFLUID_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_count();

/// Runs body(i) for i in [0, n) over thread_count() workers using a static
/// contiguous partition. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace photonfluid
