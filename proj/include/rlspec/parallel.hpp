#pragma once

#include <cstddef>
#include <functional>

namespace rlspec {

/// Worker cap for the ray-parallel routines. Defaults to RLSPEC_THREADS when set,
/// otherwise the hardware concurrency.
int max_threads();
void set_max_threads(int threads);

/// Runs body(i) for i in [0, count); results must be written to per-index slots.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace rlspec
