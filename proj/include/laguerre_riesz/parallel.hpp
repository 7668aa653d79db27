#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace laguerre_riesz {

namespace detail {
inline std::atomic<int>& thread_setting() {
  static std::atomic<int> value{1};
  return value;
}
}  // namespace detail

// Worker count used by the library's parallel loops. Results never depend on
// it: each index writes its own output slot.
inline int worker_threads() { return std::max(1, detail::thread_setting().load()); }
inline void set_worker_threads(int n) { detail::thread_setting().store(std::max(1, n)); }

template <class Body>
void parallel_for(std::size_t count, Body&& body, int threads = worker_threads()) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, threads)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < count; i = next++) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace laguerre_riesz
