#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace qiren {

// Process-wide worker count for batch loops. 1 = serial (the default),
// 0 = use the hardware count.
inline int& thread_count_ref() {
  static int count = 1;
  return count;
}

inline void set_num_threads(int n) {
  if (n == 0) n = int(std::thread::hardware_concurrency());
  thread_count_ref() = std::max(1, n);
}

inline int get_num_threads() { return thread_count_ref(); }

// Splits [0, n) into contiguous chunks, one per worker; fn(tid, begin, end).
// Runs inline when a single worker suffices so serial code stays serial.
inline void parallel_for(size_t n,
                         const std::function<void(int, size_t, size_t)>& fn) {
  const int workers = std::min<size_t>(size_t(get_num_threads()), n) > 0
                          ? int(std::min<size_t>(size_t(get_num_threads()), n))
                          : 1;
  if (n == 0) return;
  if (workers <= 1) {
    fn(0, 0, n);
    return;
  }
  const size_t chunk = (n + size_t(workers) - 1) / size_t(workers);
  std::vector<std::thread> pool;
  pool.reserve(size_t(workers));
  for (int t = 0; t < workers; ++t) {
    const size_t begin = size_t(t) * chunk;
    const size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, t, begin, end] { fn(t, begin, end); });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace qiren
