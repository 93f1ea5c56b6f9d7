#pragma once

#include <cstddef>
#include <functional>

namespace choreo {

// Worker count for the per-candidate fan-out: CHOREO_THREADS when set (clamped
// to at least 1), otherwise hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, count) across workers. Each index writes only its
// own output slot, so results are identical to the serial order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace choreo
