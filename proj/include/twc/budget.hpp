#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>

namespace twc {

class TimeoutError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace budget {

// Per-thread wall-clock deadline. Long-running kernels call check() at coarse
// points; when the deadline passes, TimeoutError unwinds the computation.
// Results are unaffected unless the timeout actually fires.
class ScopedDeadline {
public:
  explicit ScopedDeadline(std::chrono::steady_clock::duration limit);
  ~ScopedDeadline();
  ScopedDeadline(const ScopedDeadline&) = delete;
  ScopedDeadline& operator=(const ScopedDeadline&) = delete;

private:
  std::optional<std::chrono::steady_clock::time_point> previous_;
};

// Throws TimeoutError if this thread's deadline has passed; cheap when no
// deadline is set.
void check();

}  // namespace budget
}  // namespace twc
