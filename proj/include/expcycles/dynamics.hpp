#pragma once

// The repeated-exponentiation map u -> g^u mod p on {1, ..., p-1}: single
// steps, orbits, cycle censuses and the full functional-graph structure.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "expcycles/errors.hpp"
#include "expcycles/graph.hpp"
#include "expcycles/modarith.hpp"
#include "expcycles/parallel.hpp"

namespace expcycles {

class ExpMap {
 public:
  /// g is reduced mod p; g = 0 mod p is rejected.
  ExpMap(PrimeModulus p, u64 g) : p_(p), g_(g % p.value()) {
    if (g_ == 0) throw InvalidInput("bad g: g = 0 mod p");
  }

  PrimeModulus modulus() const noexcept { return p_; }
  u64 p() const noexcept { return p_.value(); }
  u64 g() const noexcept { return g_; }

  u64 apply(u64 u) const {
    check_domain(u);
    return step(u);
  }

  /// u_k of the sequence u_n = f(u_{n-1}); iterate(u0, 0) == u0.
  u64 iterate(u64 u0, u64 k) const {
    check_domain(u0);
    u64 x = u0;
    for (u64 i = 0; i < k; ++i) x = step(x);
    return x;
  }

  /// Unchecked step; u must lie in {1, ..., p-1}.
  u64 step(u64 u) const noexcept { return pow_mod(g_, u, p_.value()); }

  void check_domain(u64 u) const {
    if (u == 0 || u >= p_.value()) {
      throw InvalidInput("u = " + std::to_string(u) + " outside {1, ..., p-1}");
    }
  }

 private:
  PrimeModulus p_;
  u64 g_;
};

struct OrbitRecord {
  u64 start = 0;
  u64 tail_length = 0;
  u64 cycle_length = 0;
  u64 entry_point = 0;
  friend bool operator==(const OrbitRecord&, const OrbitRecord&) = default;
};

/// Brent's cycle finding followed by exact tail resolution; O(1) memory.
inline OrbitRecord orbit(const ExpMap& map, u64 u0) {
  map.check_domain(u0);
  u64 power = 1, lambda = 1;
  u64 tortoise = u0;
  u64 hare = map.step(u0);
  while (tortoise != hare) {
    if (power == lambda) {
      tortoise = hare;
      power *= 2;
      lambda = 0;
    }
    hare = map.step(hare);
    ++lambda;
  }
  tortoise = hare = u0;
  for (u64 i = 0; i < lambda; ++i) hare = map.step(hare);
  u64 mu = 0;
  while (tortoise != hare) {
    tortoise = map.step(tortoise);
    hare = map.step(hare);
    ++mu;
  }
  return {u0, mu, lambda, tortoise};
}

/// Brute-force census straight from the definition: for every u0 iterate
/// k_max times and record each k with u_k = u0. The range {1, ..., p-1} is
/// split into contiguous blocks merged by summation.
inline CycleCensus census_naive(const ExpMap& map, std::size_t k_max, unsigned workers = 1) {
  if (k_max < 1) throw InvalidInput("k_max must be >= 1");
  const u64 n = map.p() - 1;
  struct Partial {
    std::vector<u64> dividing, least;
  };
  const unsigned blocks = std::max(1u, workers);
  std::vector<Partial> partials(blocks, Partial{std::vector<u64>(k_max + 1, 0), std::vector<u64>(k_max + 1, 0)});
  parallel_blocks(n, blocks, [&](std::size_t begin, std::size_t end, std::size_t b) {
    auto& part = partials[b];
    for (std::size_t i = begin; i < end; ++i) {
      const u64 u0 = i + 1;
      u64 x = u0;
      bool seen = false;
      for (std::size_t k = 1; k <= k_max; ++k) {
        x = map.step(x);
        if (x == u0) {
          ++part.dividing[k];
          if (!seen) ++part.least[k];
          seen = true;
        }
      }
    }
  });
  CycleCensus c;
  c.k_max = k_max;
  c.n_dividing.assign(k_max + 1, 0);
  c.n_least_period.assign(k_max + 1, 0);
  for (const auto& part : partials) {
    for (std::size_t k = 1; k <= k_max; ++k) {
      c.n_dividing[k] += part.dividing[k];
      c.n_least_period[k] += part.least[k];
    }
  }
  return c;
}

inline constexpr u64 kDefaultMemoryBudget = 8ULL << 30;

/// Successor table of the map on indices 0..p-2 (index i stands for u = i+1),
/// built by running products.
inline std::vector<std::uint32_t> successor_table(const ExpMap& map) {
  const u64 p = map.p();
  if (p - 1 > kMaxGraphNodes) throw ResourceError("p too large for the functional-graph route");
  std::vector<std::uint32_t> table(p - 1);
  u64 power = 1;
  for (u64 i = 0; i < p - 1; ++i) {
    power = power * map.g() % p;  // both factors < 2^31
    table[i] = static_cast<std::uint32_t>(power - 1);
  }
  return table;
}

inline void check_graph_budget(u64 nodes, u64 memory_budget) {
  if (nodes > kMaxGraphNodes || functional_graph_bytes(nodes) > memory_budget) {
    throw ResourceError("census_graph: " + std::to_string(nodes) + " nodes exceed the memory budget of " +
                        std::to_string(memory_budget) + " bytes");
  }
}

/// Full decomposition of the functional graph; `on_cycle` receives each
/// cycle as residues u in {1, ..., p-1}.
template <class OnCycle>
FunctionalGraphSummary graph_of(const ExpMap& map, OnCycle&& on_cycle, u64 memory_budget = kDefaultMemoryBudget) {
  check_graph_budget(map.p() - 1, memory_budget);
  const auto table = successor_table(map);
  std::vector<u64> residues;
  return analyze_functional_graph(
      table.size(), [&](std::uint32_t i) { return table[i]; },
      [&](std::span<const std::uint32_t> cycle) {
        residues.assign(cycle.begin(), cycle.end());
        for (auto& r : residues) ++r;
        on_cycle(std::span<const u64>(residues));
      });
}

inline FunctionalGraphSummary graph_of(const ExpMap& map, u64 memory_budget = kDefaultMemoryBudget) {
  return graph_of(map, [](std::span<const u64>) {}, memory_budget);
}

/// O(p) census via the functional graph; agrees with census_naive.
inline std::pair<FunctionalGraphSummary, CycleCensus> census_graph(const ExpMap& map, std::size_t k_max = 3,
                                                                    u64 memory_budget = kDefaultMemoryBudget) {
  if (k_max < 1) throw InvalidInput("k_max must be >= 1");
  auto summary = graph_of(map, memory_budget);
  auto census = summary.census(k_max);
  return {std::move(summary), std::move(census)};
}

/// {u : g^u = u mod p}, ascending.
inline std::vector<u64> fixed_points(const ExpMap& map) {
  std::vector<u64> out;
  u64 power = 1;
  for (u64 u = 1; u < map.p(); ++u) {
    power = mul_mod(power, map.g(), map.p());
    if (power == u) out.push_back(u);
  }
  return out;
}

}  // namespace expcycles
