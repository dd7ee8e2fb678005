#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace topoconc {

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end) over contiguous chunks of [0, total). Each index is
// processed by exactly one worker, so writes to disjoint slots need no
// synchronization and results do not depend on the worker count.
template <typename Fn>
void parallel_chunks(std::size_t total, int workers, Fn&& fn) {
  workers = resolve_workers(workers);
  if (workers <= 1 || total <= 1) {
    fn(std::size_t{0}, total);
    return;
  }
  std::size_t nthreads = std::min<std::size_t>(workers, total);
  std::size_t chunk = (total + nthreads - 1) / nthreads;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    std::size_t begin = t * chunk;
    std::size_t end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace topoconc
