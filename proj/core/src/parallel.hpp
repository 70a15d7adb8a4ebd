#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace halolab::detail {

inline unsigned resolve_workers(unsigned requested, std::uint64_t tasks) {
  unsigned w = requested == 0 ? std::max(1U, std::thread::hardware_concurrency()) : requested;
  if (tasks < w) w = static_cast<unsigned>(std::max<std::uint64_t>(tasks, 1));
  return w;
}

/// Runs fn(worker, begin, end) over `workers` contiguous slices of [0, total).
template <class Fn>
void parallel_slices(unsigned workers, std::uint64_t total, Fn&& fn) {
  auto slice = [&](unsigned w) { return total * w / workers; };
  if (workers <= 1) {
    fn(0U, std::uint64_t{0}, total);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        fn(w, slice(w), slice(w + 1));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// "Next unmarked cell" pointers with path halving; marks each cell once.
class NextUnmarked {
 public:
  explicit NextUnmarked(std::uint64_t cells) : parent_(cells + 1) {
    for (std::uint64_t i = 0; i <= cells; ++i) parent_[i] = static_cast<std::uint32_t>(i);
  }

  std::uint64_t find(std::uint64_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  /// Calls fn(cell) for each unmarked cell in [begin, end) and marks it.
  template <class Fn>
  void mark_range(std::uint64_t begin, std::uint64_t end, Fn&& fn) {
    for (std::uint64_t i = find(begin); i < end; i = find(i + 1)) {
      fn(i);
      parent_[i] = static_cast<std::uint32_t>(i + 1);
    }
  }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace halolab::detail
