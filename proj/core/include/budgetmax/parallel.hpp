#pragma once

#include <cstddef>
#include <functional>

namespace budgetmax {

/// Runs fn(i) for every i in [0, n). workers <= 1 runs inline; otherwise a
/// transient thread pool pulls indices from a shared counter. The first
/// exception thrown by any fn is rethrown on the calling thread.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

int default_workers();

}  // namespace budgetmax
