#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace weakkam {

namespace detail {
inline std::atomic<unsigned>& thread_cap() {
  static std::atomic<unsigned> cap{0};  // 0 = hardware concurrency
  return cap;
}
}  // namespace detail

/// Caps worker threads used by parallel loops; 0 restores the default.
inline void set_max_threads(unsigned n) { detail::thread_cap().store(n); }

inline unsigned max_threads() {
  const unsigned cap = detail::thread_cap().load();
  if (cap != 0) return cap;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [begin, end) on contiguous chunks. Every index is
/// visited exactly once, so bodies that write only slot i give results
/// independent of the thread count.
template <typename Body>
void parallel_for(std::size_t begin, std::size_t end, Body&& body, std::size_t min_chunk = 256) {
  if (end <= begin) return;
  const std::size_t count = end - begin;
  const std::size_t workers =
      std::min<std::size_t>(max_threads(), (count + min_chunk - 1) / min_chunk);
  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = begin + w * chunk;
    const std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace weakkam
