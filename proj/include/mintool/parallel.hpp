#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace mintool {

inline int thread_cap() {
  if (const char* env = std::getenv("MINTOOL_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(chunk, begin, end) over fixed-size chunks. The chunk layout does not
// depend on the thread count, and callers merge per-chunk results in chunk
// order, so reductions are bit-stable no matter how work is scheduled.
template <typename Fn>
void parallel_chunks(long total, long chunk_size, Fn&& fn) {
  if (total <= 0) return;
  chunk_size = std::max<long>(chunk_size, 1);
  const long n_chunks = (total + chunk_size - 1) / chunk_size;
  const int n_threads = std::min<long>(thread_cap(), n_chunks);

  if (n_threads <= 1) {
    for (long c = 0; c < n_chunks; ++c)
      fn(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
    return;
  }

  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    workers.emplace_back([&, t]() {
      for (long c = t; c < n_chunks; c += n_threads)
        fn(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace mintool
