#pragma once

#include <cstddef>
#include <functional>

namespace jumplab {

/// Worker cap: JUMPLAB_WORKERS when set (>=1), hardware concurrency otherwise.
unsigned worker_count();

/// Runs task(i) for i in [0, count) on a bounded pool.
///
/// Tasks must write results keyed by their own index (or into counting
/// accumulators) so the merged outcome is independent of scheduling and of
/// the worker count. Exceptions from tasks are rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace jumplab
