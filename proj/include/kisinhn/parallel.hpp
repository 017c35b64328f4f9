#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace kisinhn {

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Results must be written
// by index, so output order never depends on scheduling. The first exception
// (lowest index) is rethrown.
inline void parallel_for(int jobs, int count, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex mu;
  int err_index = count;
  std::exception_ptr err;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < err_index) err_index = i, err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

template <class T>
std::vector<T> parallel_map(int jobs, int count, const std::function<T(int)>& fn) {
  std::vector<T> out(count);
  parallel_for(jobs, count, [&](int i) { out[i] = fn(i); });
  return out;
}

}  // namespace kisinhn
