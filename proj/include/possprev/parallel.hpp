#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace possprev {

// Worker count: POSSPREV_THREADS if set and positive, else the hardware
// concurrency.
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("POSSPREV_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Evaluates fn(0) ... fn(n-1) on a pool of threads. Results are stored by
// index, so output order never depends on scheduling. The first exception
// thrown by any call is rethrown after all workers stop.
template <class F>
auto parallel_map(long n, F&& fn, unsigned threads = default_thread_count())
    -> std::vector<std::invoke_result_t<F&, long>> {
  using R = std::invoke_result_t<F&, long>;
  std::vector<std::optional<R>> slots(static_cast<std::size_t>(std::max(0L, n)));
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (long i = next++; i < n; i = next++) {
      try {
        slots[static_cast<std::size_t>(i)].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max(1L, n))));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<R> out;
  out.reserve(slots.size());
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace possprev
