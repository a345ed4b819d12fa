#pragma once

#include <cstddef>
#include <functional>

namespace wfpp {

/// Process-wide worker budget for replicate farms and shortest-path sweeps.
/// Results never depend on the budget: work items write to disjoint,
/// index-addressed slots.
void set_thread_budget(int n);
int thread_budget();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = budget).
/// The first exception thrown by any item is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace wfpp
