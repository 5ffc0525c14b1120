#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace dimentropy {

// Process-wide worker count; 0 means std::thread::hardware_concurrency().
void set_default_workers(int workers);
int default_workers();

// Runs body(i) for i in [0, n) over static contiguous chunks. Each index is
// visited exactly once, so results written to per-index slots are
// independent of thread count and scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body, int workers = 0) {
  if (workers <= 0) workers = default_workers();
  const std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  if (chunks <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(chunks);
  const std::size_t step = (n + chunks - 1) / chunks;
  for (std::size_t c = 0; c < chunks; ++c) {
    pool.emplace_back([&, c] {
      try {
        const std::size_t lo = c * step, hi = std::min(n, lo + step);
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace dimentropy
