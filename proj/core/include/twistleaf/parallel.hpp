#pragma once

#include <cstddef>
#include <functional>

namespace twistleaf {

/// Worker count from TWISTLEAF_THREADS (unset or 0 means hardware concurrency).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index is handled exactly once; callers
/// write results by index so the outcome does not depend on scheduling. The
/// exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace twistleaf
