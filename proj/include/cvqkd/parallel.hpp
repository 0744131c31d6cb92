#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace cvqkd {

// Worker count from CVQKD_RATES_THREADS; 0 or unset means hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, n) on up to `workers` threads. If any call
// throws, the exception from the lowest index is rethrown after all
// workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t workers = worker_count());

// Results are stored by index, so output order never depends on scheduling.
template <class F>
auto parallel_map(std::size_t n, F&& fn, std::size_t workers = worker_count()) {
  using T = decltype(fn(std::size_t{0}));
  std::vector<std::optional<T>> slots(n);
  parallel_for(n, [&](std::size_t i) { slots[i].emplace(fn(i)); }, workers);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace cvqkd
