#pragma once

#include <cstddef>
#include <functional>

namespace qlti {

// Number of worker threads for frequency sweeps: the QLTI_THREADS environment
// variable if set (minimum 1), otherwise the hardware concurrency.
unsigned sweep_thread_count();

// Runs fn(i) for i in [0, count) across the sweep workers. Bodies must write
// to disjoint slots; the first exception thrown by any body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace qlti
