#pragma once

#include <cstddef>
#include <functional>

namespace wrinkle {

// WRINKLE_THREADS overrides the hardware default
int thread_count();

// Runs fn(i) for i in [0, n). Each index is independent, so results do not
// depend on the thread count as long as callers reduce in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wrinkle
