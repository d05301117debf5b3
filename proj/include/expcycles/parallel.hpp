#pragma once

// Domain-partitioned parallelism with deterministic merge. Work items are
// split into contiguous blocks, one per worker; results are written to
// per-index slots or per-block partials, so the outcome never depends on
// the worker count or scheduling.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace expcycles {

inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Calls body(begin, end, block_index) on disjoint blocks covering [0, count).
/// Exceptions thrown by any block are rethrown on the calling thread.
template <class Body>
void parallel_blocks(std::size_t count, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  const std::size_t blocks = std::min<std::size_t>(workers, std::max<std::size_t>(count, 1));
  if (blocks <= 1) {
    body(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::exception_ptr> errors(blocks);
  std::vector<std::thread> pool;
  pool.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = count * b / blocks;
    const std::size_t end = count * (b + 1) / blocks;
    pool.emplace_back([&, begin, end, b] {
      try {
        body(begin, end, b);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// out[i] = fn(i) for i in [0, count), evaluated on `workers` threads.
template <class Result, class Fn>
std::vector<Result> parallel_map(std::size_t count, unsigned workers, Fn&& fn) {
  std::vector<Result> out(count);
  parallel_blocks(count, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
  });
  return out;
}

}  // namespace expcycles
