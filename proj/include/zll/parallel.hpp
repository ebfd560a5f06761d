#pragma once

#include <cstdint>
#include <span>
#include <thread>
#include <vector>

namespace zll {

// Worker count actually used for a request; 0 or negative means "one".
inline int effective_threads(int requested) {
  if (requested <= 1) return 1;
  const unsigned hw = std::thread::hardware_concurrency();
  const int cap = hw == 0 ? 1 : static_cast<int>(hw);
  return requested < cap ? requested : cap;
}

// Runs body(begin, end) over contiguous chunks of [0, n). Workers must write
// to disjoint per-index state; the caller reduces afterwards in index order,
// so the outcome is independent of the worker count and scheduling.
template <class Body>
void parallel_for(std::int64_t n, int threads, Body&& body) {
  if (n <= 0) return;
  threads = effective_threads(threads);
  if (threads == 1 || n < 2 * threads) {
    body(std::int64_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const std::int64_t chunk = (n + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = begin + chunk < n ? begin + chunk : n;
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& th : pool) th.join();
}

namespace detail {

inline double pairwise_sum_range(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_range(v, half) + pairwise_sum_range(v + half, n - half);
}

}  // namespace detail

// Pairwise (tree) summation in index order. The reduction tree depends only
// on the length, so totals are bit-identical no matter how many threads
// produced the inputs, and rounding error grows like O(log n).
inline double pairwise_sum(std::span<const double> v) {
  return detail::pairwise_sum_range(v.data(), v.size());
}

}  // namespace zll
