#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace saddle {

/// Forces a worker count when nonzero, bypassing the hardware query. Lets
/// tests exercise the parallel merge on any machine.
inline std::size_t& worker_override() {
  static std::size_t n = 0;
  return n;
}

/// Worker count: hardware concurrency, capped by SADDLE_TILER_THREADS when set.
inline std::size_t worker_count() {
  if (worker_override() != 0) return worker_override();
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SADDLE_TILER_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
    } catch (...) {
      // ignore malformed values
    }
  }
  return n;
}

/// Splits [0, n) into contiguous blocks, one per worker, and runs
/// fn(worker, begin, end). Block boundaries depend only on n and the worker
/// count, and callers merge per-worker results in worker order.
template <typename Fn>
void parallel_blocks(std::size_t n, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace saddle
