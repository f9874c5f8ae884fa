#pragma once

#include <functional>

namespace memnet {

/// Run fn(0..count-1) on up to `threads` workers (0 = hardware concurrency).
/// Indices are partitioned statically; fn must only write to per-index state.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace memnet
