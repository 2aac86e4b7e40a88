#pragma once

#include <cstddef>
#include <functional>

namespace shrinker_ot {

/// Worker count: SHRINKER_OT_THREADS if set and positive, else hardware concurrency.
int thread_count();

/// Runs body(i) for i in [begin, end) over contiguous chunks, one per worker.
/// Each index is visited exactly once; bodies must not share mutable state.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace shrinker_ot
