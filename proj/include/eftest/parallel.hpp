#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace eftest {

// Runs f(i) for i in [0,n) on up to `workers` threads. Work items must touch
// only their own output slots; results are then identical for any worker
// count because nothing depends on scheduling. The first exception thrown by
// a work item is rethrown in the caller after the pool drains.
template <class F>
void parallel_for(int n, int workers, F&& f) {
  if (n <= 0) return;
  int w = workers < 1 ? 1 : workers;
  if (w > n) w = n;
  if (w == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto drain = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int t = 0; t < w; ++t) pool.emplace_back(drain);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace eftest
