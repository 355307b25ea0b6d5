#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace rarenmt {

// Runs fn(i) for i in [0, count) across `threads` workers with a static
// partition. Callers write results into index i of a pre-sized output, so
// the result is identical for any thread count.
template <class Fn>
void parallel_for_index(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  unsigned workers = threads < count ? threads : static_cast<unsigned>(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace rarenmt
