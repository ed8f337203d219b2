#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

// Index-parallel loop used for curve sampling and optimizer restarts. Every
// index writes only its own output slot, so results do not depend on the
// thread count. TANGLE_ROOF_THREADS caps the worker count; 1 means serial.

namespace tangleroof::detail {

inline int thread_budget() {
  int n = int(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("TANGLE_ROOF_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = int(std::min<long>(v, 64));
  }
  return n;
}

inline void parallel_for(int count, const std::function<void(int)>& body) {
  const int threads = std::min(thread_budget(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace tangleroof::detail
