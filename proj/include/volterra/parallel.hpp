// Deterministic index-parallel loops. Each index writes its own slot, so
// results do not depend on the thread count.
#ifndef VOLTERRA_PARALLEL_HPP
#define VOLTERRA_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace volterra {

/// Worker count: VOLTERRA_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
unsigned thread_count();

/// Calls body(i) for i in [0, n). Exceptions from any index are rethrown
/// (the one with the smallest index wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace volterra

#endif  // VOLTERRA_PARALLEL_HPP
