#pragma once

#include <functional>

namespace nlns {

// Runs fn(i) for every i in [0, n). Indices are sharded statically across
// workers, so code that writes results into per-index slots produces the same
// output for any worker count. fn must not touch shared mutable state.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

int hardware_workers();

}  // namespace nlns
