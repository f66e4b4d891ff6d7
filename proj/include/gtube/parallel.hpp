#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gtube {

// Worker count: set_thread_count() if called with n > 0, else the THREADS
// environment variable, else hardware concurrency.
int thread_count();
void set_thread_count(int n);

// Runs fn(chunk_index, begin, end) over fixed-size chunks of [0, n). Chunk
// boundaries depend only on n and `chunk`, so reductions done per chunk and
// combined in chunk order are independent of the thread count.
template <class F>
void parallel_chunks(std::size_t n, std::size_t chunk, F&& fn) {
  if (n == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), nchunks);
  if (nt <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) fn(c, c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  std::exception_ptr err;
  std::mutex mu;
  auto work = [&](std::size_t tid) {
    try {
      for (std::size_t c = tid; c < nchunks; c += nt) fn(c, c * chunk, std::min(n, (c + 1) * chunk));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!err) err = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(work, t);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace gtube
