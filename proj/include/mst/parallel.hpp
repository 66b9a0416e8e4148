#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mst {

/// Run fn(i) for i in [0, n) on up to `workers` threads. Every index is
/// processed exactly once, so results written by index do not depend on
/// scheduling. The first exception thrown by any task is rethrown.
template <class Fn> void parallel_for(std::size_t n, int workers, Fn &&fn) {
  const std::size_t threads = std::min<std::size_t>(std::max(1, workers), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error)
            error = std::current_exception();
        }
      }
    });
  }
  for (auto &th : pool)
    th.join();
  if (error)
    std::rethrow_exception(error);
}

} // namespace mst
