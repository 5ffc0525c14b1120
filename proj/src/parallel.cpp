#include "dimentropy/parallel.hpp"

#include <atomic>

namespace dimentropy {

namespace {
std::atomic<int> g_workers{0};
}

void set_default_workers(int workers) { g_workers = std::max(workers, 0); }

int default_workers() {
  const int w = g_workers.load();
  if (w > 0) return w;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace dimentropy
