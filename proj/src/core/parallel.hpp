#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace horolab {

// Runs fn(i) for i in [0, count) across `workers` threads. Each index is
// processed exactly once and results must be written to caller-owned,
// index-addressed slots, so the outcome is identical for any worker count.
inline void run_indexed(size_t count, unsigned workers, const std::function<void(size_t)>& fn) {
  if (count == 0) return;
  if (workers <= 1 || count == 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const size_t chunk = 64;
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      size_t begin = next.fetch_add(chunk);
      if (begin >= count) return;
      size_t end = begin + chunk < count ? begin + chunk : count;
      try {
        for (size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  unsigned n = workers < count ? workers : static_cast<unsigned>(count);
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline unsigned default_workers() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

}  // namespace horolab
