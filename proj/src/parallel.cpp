#include "parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mfg::detail {

namespace {
std::atomic<int> g_cap{0};
}

void set_worker_cap(int n) { g_cap = std::max(0, n); }

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("MFG_THREADS")) {
    int e = std::atoi(env);
    if (e >= 1) n = std::min(n, e);
  }
  if (int c = g_cap.load(); c > 0) n = std::min(n, c);
  return n;
}

void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t)>& fn) {
  const int w = static_cast<int>(std::min<std::ptrdiff_t>(worker_count(), n));
  if (w <= 1) {
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::ptrdiff_t i = t; i < n; i += w) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(m);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace mfg::detail
