#pragma once

// Functional-graph decomposition of a self-map on {0, ..., n-1}.

#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "expcycles/errors.hpp"

namespace expcycles {

/// Exact counts of periodic points. Entries are 1-based: index k holds the
/// value for k, index 0 is unused and always zero.
struct CycleCensus {
  std::size_t k_max = 0;
  /// n_dividing[k] = #{u : u_k = u_0}, i.e. least period divides k.
  std::vector<std::uint64_t> n_dividing;
  /// n_least_period[d] = #{u : least period of u is exactly d}.
  std::vector<std::uint64_t> n_least_period;

  std::uint64_t dividing(std::size_t k) const { return n_dividing.at(k); }
  std::uint64_t least_period(std::size_t d) const { return n_least_period.at(d); }

  /// Fills n_dividing from n_least_period by summing over divisors.
  static CycleCensus from_least_periods(std::size_t k_max, std::vector<std::uint64_t> least) {
    CycleCensus c;
    c.k_max = k_max;
    least.resize(k_max + 1, 0);
    least[0] = 0;
    c.n_least_period = std::move(least);
    c.n_dividing.assign(k_max + 1, 0);
    for (std::size_t k = 1; k <= k_max; ++k) {
      for (std::size_t d = 1; d <= k; ++d) {
        if (k % d == 0) c.n_dividing[k] += c.n_least_period[d];
      }
    }
    return c;
  }

  friend bool operator==(const CycleCensus&, const CycleCensus&) = default;
};

struct FunctionalGraphSummary {
  std::uint64_t component_count = 0;
  std::uint64_t cyclic_point_count = 0;
  /// cycle length -> number of cycles of that length
  std::map<std::uint64_t, std::uint64_t> cycle_lengths;
  std::uint64_t max_tail_length = 0;
  bool is_permutation = false;

  /// Points whose least period is exactly d.
  std::uint64_t points_with_period(std::uint64_t d) const {
    auto it = cycle_lengths.find(d);
    return it == cycle_lengths.end() ? 0 : it->first * it->second;
  }

  CycleCensus census(std::size_t k_max) const {
    std::vector<std::uint64_t> least(k_max + 1, 0);
    for (std::size_t d = 1; d <= k_max; ++d) least[d] = points_with_period(d);
    return CycleCensus::from_least_periods(k_max, std::move(least));
  }

  friend bool operator==(const FunctionalGraphSummary&, const FunctionalGraphSummary&) = default;
};

/// Bytes of working memory analyze_functional_graph needs for n nodes when
/// the successor is also tabulated (table + status + path, one word each).
constexpr std::uint64_t functional_graph_bytes(std::uint64_t n) { return 12 * n; }

/// Largest node count the 32-bit status encoding supports.
inline constexpr std::uint64_t kMaxGraphNodes = (1ULL << 31) - 1;

/// Iterative visited-marking traversal. `next(i)` must return a node in
/// [0, n). `on_cycle` receives the nodes of every cycle exactly once, in
/// traversal order.
template <class Next, class OnCycle>
FunctionalGraphSummary analyze_functional_graph(std::uint64_t n, Next&& next, OnCycle&& on_cycle) {
  if (n > kMaxGraphNodes) throw ResourceError("functional graph too large for 32-bit status words");
  // status: 0 unvisited; kOnPath | index while on the current path;
  // otherwise depth + 1 (cyclic nodes have depth 0).
  constexpr std::uint32_t kOnPath = 0x8000'0000u;
  std::vector<std::uint32_t> status(n, 0);
  std::vector<std::uint32_t> path;
  FunctionalGraphSummary out;

  for (std::uint64_t start = 0; start < n; ++start) {
    if (status[start] != 0) continue;
    path.clear();
    std::uint32_t x = static_cast<std::uint32_t>(start);
    while (status[x] == 0) {
      status[x] = kOnPath | static_cast<std::uint32_t>(path.size());
      path.push_back(x);
      x = static_cast<std::uint32_t>(next(x));
    }
    std::size_t tail_end = path.size();
    std::uint64_t base_depth = 0;
    if (status[x] & kOnPath) {
      const std::size_t cycle_begin = status[x] & ~kOnPath;
      const std::size_t len = path.size() - cycle_begin;
      for (std::size_t i = cycle_begin; i < path.size(); ++i) status[path[i]] = 1;
      on_cycle(std::span<const std::uint32_t>(path.data() + cycle_begin, len));
      ++out.cycle_lengths[len];
      ++out.component_count;
      out.cyclic_point_count += len;
      tail_end = cycle_begin;
    } else {
      base_depth = status[x] - 1;
    }
    for (std::size_t i = 0; i < tail_end; ++i) {
      const std::uint64_t depth = base_depth + (tail_end - i);
      status[path[i]] = static_cast<std::uint32_t>(depth + 1);
      if (depth > out.max_tail_length) out.max_tail_length = depth;
    }
  }
  out.is_permutation = out.cyclic_point_count == n;
  return out;
}

template <class Next>
FunctionalGraphSummary analyze_functional_graph(std::uint64_t n, Next&& next) {
  return analyze_functional_graph(n, std::forward<Next>(next), [](std::span<const std::uint32_t>) {});
}

}  // namespace expcycles
