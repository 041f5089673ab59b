#pragma once

#include <cstddef>
#include <functional>

namespace qfo {

/// 0 means one thread per hardware core.
int resolve_threads(int requested);

/// Runs body(i) for i in [0, n) on `threads` workers. Indices are split into
/// contiguous static blocks, so each index is always handled the same way;
/// callers write to per-index slots and reduce afterwards in index order.
/// The first exception (lowest block) is rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

} // namespace qfo
