#include "core/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vofd {

namespace {
std::atomic<int> g_threads{0};
}

void set_default_threads(int n) { g_threads.store(n < 0 ? 0 : n); }

int default_threads() {
  int n = g_threads.load();
  if (n > 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, const std::function<void(int, int)>& fn) {
  if (count <= 0) return;
  const int workers = std::min(count, default_threads());
  if (workers <= 1) {
    fn(0, count);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto chunk = [&](int w) {
    const int begin = static_cast<int>(static_cast<long long>(count) * w / workers);
    const int end =
        static_cast<int>(static_cast<long long>(count) * (w + 1) / workers);
    if (begin >= end) return;
    try {
      fn(begin, end);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(chunk, w);
  chunk(0);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace vofd
