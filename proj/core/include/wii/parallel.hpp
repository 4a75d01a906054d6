#pragma once

#include <cstddef>
#include <functional>

namespace wii {

// Worker count: WII_THREADS if set (>= 1), else hardware concurrency.
// Deterministic mode pins it to 1.
std::size_t worker_count();
void set_deterministic(bool on);
bool deterministic();

// Runs fn(i) for i in [0, n). Each index must write only its own output slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wii
