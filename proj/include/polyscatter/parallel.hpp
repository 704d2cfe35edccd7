#pragma once

#include <cstddef>
#include <functional>

namespace polyscatter {

/// Worker count: POLYSCATTER_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) across worker_count() threads. Each index is
/// visited exactly once; the first exception thrown is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace polyscatter
