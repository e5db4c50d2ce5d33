#pragma once

// Deterministic block-parallel loop. Work item i always lands in the same
// block regardless of worker count, and blocks write disjoint output, so
// results are byte-identical for any `workers`.

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace hgf::detail {

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

template <class F>
void parallel_for(std::size_t n, int workers, F&& body) {
  const int w = std::min<std::size_t>(std::max(resolve_workers(workers), 1), std::max<std::size_t>(n, 1));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  const std::size_t chunk = (n + w - 1) / w;
  for (int t = 0; t < w; ++t) {
    const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace hgf::detail
