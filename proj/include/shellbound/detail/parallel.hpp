#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace shellbound {

template <typename T, typename F>
std::vector<T> parallel_map(int count, F&& f) {
  std::vector<std::optional<T>> slots(static_cast<std::size_t>(std::max(count, 0)));
  std::atomic<int> next{0};
  // One slot per index so that the reported failure does not depend on scheduling.
  std::vector<std::exception_ptr> errors(slots.size());
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        slots[static_cast<std::size_t>(i)].emplace(f(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int workers = std::min(worker_count(), std::max(count, 1));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace shellbound
