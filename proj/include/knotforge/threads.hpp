#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace knotforge {

// Worker count: KNOTFORGE_THREADS caps it, default = hardware concurrency.
inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KNOTFORGE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return hw;
}

// Chunked parallel map over [0, n). The body must not touch shared mutable
// state; results are merged by the caller in index order, so output is
// deterministic regardless of the worker count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& chunk_body) {
  unsigned workers = worker_count();
  if (workers <= 1 || n < 2) {
    chunk_body(0, n);
    return;
  }
  std::size_t per = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (std::size_t lo = 0; lo < n; lo += per) {
    std::size_t hi = std::min(n, lo + per);
    pool.emplace_back(chunk_body, lo, hi);
  }
  for (auto& t : pool) t.join();
}

}  // namespace knotforge
