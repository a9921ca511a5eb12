#pragma once

#include <cstdint>
#include <functional>

namespace gwt {

/// Worker count: hardware concurrency, capped by the GWTAILS_THREADS
/// environment variable when set.
int worker_count();

/// Runs fn(i) for i in [0, n). Work items must be independent (each writes
/// only its own slots), so the result does not depend on the partitioning.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

/// Runs fn(begin, end) over a static partition of [0, n) into contiguous
/// ranges, one per worker.
void parallel_ranges(std::int64_t n,
                     const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace gwt
