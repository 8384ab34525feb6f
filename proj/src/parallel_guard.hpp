#ifndef BUDGETDAG_SRC_PARALLEL_GUARD_HPP
#define BUDGETDAG_SRC_PARALLEL_GUARD_HPP

#include <atomic>
#include <exception>
#include <mutex>

namespace budgetdag::detail {

// Exceptions must not unwind out of an OpenMP region. Loop bodies run
// through `run`; the first captured exception is rethrown by the caller
// once the region has joined.
class ParallelGuard {
 public:
  template <class F>
  void run(F&& body) noexcept {
    if (failed_.load(std::memory_order_relaxed)) return;
    try {
      body();
    } catch (...) {
      const std::lock_guard<std::mutex> lock(mutex_);
      if (!error_) error_ = std::current_exception();
      failed_.store(true, std::memory_order_relaxed);
    }
  }

  void rethrow_if_failed() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::atomic<bool> failed_{false};
  std::exception_ptr error_;
  std::mutex mutex_;
};

}  // namespace budgetdag::detail

#endif
