#ifndef HEAVISTEP_PARALLEL_HPP
#define HEAVISTEP_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace heavistep {

/// Worker cap: HEAVISTEP_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls fn(i) for every i in [0, n) on up to worker_count() threads. Each
/// index must write only its own output slot; results are then independent
/// of scheduling. The first exception (lowest index) is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace heavistep

#endif  // HEAVISTEP_PARALLEL_HPP
