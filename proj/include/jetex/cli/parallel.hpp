#pragma once

#include <cstddef>
#include <functional>

namespace jetex::cli {

/// Worker count: JETEX_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Calls body(i) for i in [0, n) on up to worker_count() threads. Indices are
/// handed out dynamically; the first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace jetex::cli
