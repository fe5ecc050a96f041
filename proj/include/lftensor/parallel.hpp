#pragma once

#include <cstddef>
#include <functional>

namespace lftensor {

/// Caps the worker count used by parallel_for. 0 restores the default
/// (LFTENSOR_THREADS if set, otherwise hardware concurrency).
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs fn(i) for i in [0, n). Every index must write only to its own output
/// slots; results are then independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace lftensor
