#include "regge/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace regge {

namespace {
int g_workers = 0;  // 0 = hardware concurrency
}

void set_worker_count(int workers) { g_workers = workers < 0 ? 0 : workers; }

int worker_count() {
  if (g_workers > 0) return g_workers;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const int nw = worker_count();
  if (n == 0) return;
  if (nw <= 1 || n < 32) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    const std::size_t chunk = 16;
    for (;;) {
      std::size_t begin = next.fetch_add(chunk);
      if (begin >= n) break;
      std::size_t end = begin + chunk < n ? begin + chunk : n;
      for (std::size_t i = begin; i < end; ++i) body(i);
    }
  };
  std::vector<std::thread> pool;
  int nt = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(nw), n));
  pool.reserve(static_cast<std::size_t>(nt - 1));
  for (int t = 0; t < nt - 1; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

}  // namespace regge
