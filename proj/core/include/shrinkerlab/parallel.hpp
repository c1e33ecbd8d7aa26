#pragma once

#include <functional>

namespace shrinkerlab {

// worker cap: min(hardware, SHRINKER_LAB_THREADS when set)
int max_threads();

// index-parallel loop; exceptions from workers are rethrown on the caller
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace shrinkerlab
