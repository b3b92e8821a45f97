#pragma once

// Counting many classes on a fixed number of workers. Each worker owns a
// ClassCounter (and so one histogram) for its whole lifetime.

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "hexacount/core.hpp"
#include "hexacount/midcount.hpp"

namespace hexacount {

struct WorkItem {
  std::int64_t id = -1;
  NumberSet mask;
};

/// Counts every item; on_result runs under a lock, in completion order.
/// Workers stop taking new items once *stop becomes true. The first
/// exception thrown by a worker is rethrown after all workers have joined.
template <int N>
  requires EvenOrder<N>
std::size_t count_classes(std::span<const WorkItem> items, unsigned threads, CountOptions options,
                          const std::function<void(const ClassResult&)>& on_result,
                          const std::atomic<bool>* stop = nullptr) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(items.size(), 1))));
  const auto series = generate_series<N>();
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::atomic<std::size_t> done{0};
  std::mutex lock;
  std::exception_ptr error;

  auto work = [&] {
    try {
      ClassCounter<N> counter(series, options);
      for (;;) {
        if (failed.load() || (stop != nullptr && stop->load())) return;
        const std::size_t i = next.fetch_add(1);
        if (i >= items.size()) return;
        const ClassResult r = counter.count(items[i].mask, items[i].id);
        std::lock_guard<std::mutex> g(lock);
        on_result(r);
        ++done;
      }
    } catch (...) {
      std::lock_guard<std::mutex> g(lock);
      if (!error) error = std::current_exception();
      failed = true;
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
  }
  if (error) std::rethrow_exception(error);
  return done.load();
}

}  // namespace hexacount
