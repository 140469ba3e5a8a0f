#ifndef LTR_PARALLEL_HPP_
#define LTR_PARALLEL_HPP_

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ltr {

// Worker count from the LTR_THREADS environment variable.
// Unset, 0 or 1 means serial execution.
inline std::size_t worker_count() {
  const char* env = std::getenv("LTR_THREADS");
  if (env == nullptr) return 0;
  const long n = std::strtol(env, nullptr, 10);
  return n > 0 ? static_cast<std::size_t>(n) : 0;
}

// Runs fn(i) for i in [0, n). Callers must write only to per-index slots;
// reductions over those slots then happen in index order, so parallel and
// serial execution produce identical results.
inline void parallel_for(std::size_t n,
                         const std::function<void(std::size_t)>& fn) {
  std::size_t workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (workers > n) workers = n;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ltr

#endif  // LTR_PARALLEL_HPP_
