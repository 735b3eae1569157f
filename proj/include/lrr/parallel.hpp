#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace lrr {

/// Runs body(t) for t in [0, count) on up to `threads` workers. Each trial
/// owns its output slot and its own forked rng stream, so results do not
/// depend on the schedule; threads <= 1 runs inline. The first exception
/// thrown by any trial is rethrown on the calling thread.
inline void parallel_trials(long count, int threads,
                            const std::function<void(long)>& body) {
  if (count < 0) throw std::invalid_argument("parallel_trials: negative count");
  if (threads <= 1 || count <= 1) {
    for (long t = 0; t < count; ++t) body(t);
    return;
  }
  const int workers = static_cast<int>(
      std::min<long>(threads, std::max<long>(1, count)));
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_lock;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const long t = next.fetch_add(1);
        if (t >= count) return;
        try {
          body(t);
        } catch (...) {
          std::lock_guard<std::mutex> guard(error_lock);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

} // namespace lrr
