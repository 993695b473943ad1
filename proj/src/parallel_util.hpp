// Deterministic exception capture for OpenMP loops: the error raised at the
// smallest loop key wins, independent of thread scheduling.
#pragma once

#include <climits>
#include <exception>
#include <mutex>

namespace nullwave::detail {

class FirstError {
 public:
  void capture(long key) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (key < key_) {
      key_ = key;
      error_ = std::current_exception();
    }
  }
  bool failed() const { return static_cast<bool>(error_); }
  void rethrow() {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  long key_ = LONG_MAX;
  std::exception_ptr error_;
};

}  // namespace nullwave::detail
