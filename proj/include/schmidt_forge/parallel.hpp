#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace schmidt_forge {

/// Worker count: SCHMIDT_FORGE_THREADS caps it, 0 or unset means hardware
/// concurrency.
inline std::size_t thread_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SCHMIDT_FORGE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return hw;
}

/// Runs fn(i) for i in [0, count). Each index is handled exactly once; the
/// first exception thrown by any worker is rethrown on the caller's thread.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(thread_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace schmidt_forge
