#pragma once

#include <cstddef>
#include <functional>

namespace mfg::detail {

// Worker count: hardware concurrency, capped by MFG_THREADS when set.
int worker_count();
void set_worker_cap(int n);  // 0 restores the default

// Calls fn(i) for i in [0, n), strided across workers.
void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t)>& fn);

}  // namespace mfg::detail
