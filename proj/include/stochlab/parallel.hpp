#pragma once

#include <cstddef>
#include <functional>

namespace stochlab {

/// Runs body(i) for i in [0, count) on up to `workers` threads (0 = hardware
/// concurrency). Each index is executed exactly once; callers write results into
/// per-index slots and merge in index order, so output never depends on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned workers = 0);

}  // namespace stochlab
