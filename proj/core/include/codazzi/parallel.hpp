#pragma once

#include <functional>

namespace codazzi {

/// Worker count for data-parallel sweeps: hardware concurrency, capped by the
/// CODAZZI_LAB_THREADS environment variable when set.
int worker_count();

/// Apply fn(i) for i in [0, n). Work is split into fixed-size blocks claimed
/// by workers; because consumers write to disjoint per-index slots and all
/// reductions happen afterwards in index order, results do not depend on the
/// worker count.
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace codazzi
