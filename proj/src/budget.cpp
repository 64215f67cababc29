#include "twc/budget.hpp"

namespace twc::budget {

namespace {
thread_local std::optional<std::chrono::steady_clock::time_point> tl_deadline;
}

ScopedDeadline::ScopedDeadline(std::chrono::steady_clock::duration limit) {
  previous_ = tl_deadline;
  auto candidate = std::chrono::steady_clock::now() + limit;
  // Nested scopes only ever tighten the deadline.
  if (!tl_deadline || candidate < *tl_deadline) tl_deadline = candidate;
}

ScopedDeadline::~ScopedDeadline() { tl_deadline = previous_; }

void check() {
  if (tl_deadline && std::chrono::steady_clock::now() > *tl_deadline)
    throw TimeoutError("computation exceeded its time budget");
}

}  // namespace twc::budget
