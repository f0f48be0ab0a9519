#ifndef EWOPT_SRC_PARALLEL_HPP
#define EWOPT_SRC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ewopt::detail {

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Calls body(i) for every i in [0, count) on a bounded pool. Work items must
// write to disjoint slots; the first exception thrown is rethrown here.
template <typename Body>
void parallel_for(std::size_t count, int workers, Body&& body) {
  const std::size_t pool =
      std::min<std::size_t>(count, static_cast<std::size_t>(resolve_workers(workers)));
  if (pool <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(pool);
  for (std::size_t t = 0; t < pool; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ewopt::detail

#endif  // EWOPT_SRC_PARALLEL_HPP
