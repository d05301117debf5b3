#include <gtest/gtest.h>

#include <random>
#include <set>

#include "expcycles/dynamics.hpp"
#include "oracles.hpp"

namespace expcycles {
namespace {

ExpMap make(u64 p, u64 g) { return ExpMap(PrimeModulus(p), g); }

TEST(ExpMap, ReducesGAndRejectsZero) {
  EXPECT_EQ(make(11, 13).g(), 2u);
  EXPECT_THROW(make(11, 22), InvalidInput);
  EXPECT_THROW(make(11, 0), InvalidInput);
}

TEST(Apply, Examples) {
  EXPECT_EQ(make(7, 3).apply(2), 2u);
  EXPECT_EQ(make(11, 2).apply(6), 9u);
  for (u64 u = 1; u < 13; ++u) EXPECT_EQ(make(13, 1).apply(u), 1u);
}

TEST(Apply, RejectsValuesOutsideDomain) {
  const auto map = make(11, 2);
  EXPECT_THROW(map.apply(0), InvalidInput);
  EXPECT_THROW(map.apply(11), InvalidInput);
  EXPECT_THROW(map.iterate(0, 3), InvalidInput);
}

TEST(Iterate, Examples) {
  EXPECT_EQ(make(11, 2).iterate(3, 2), 3u);
  EXPECT_EQ(make(11, 2).iterate(5, 0), 5u);
  EXPECT_EQ(make(7, 3).iterate(1, 3), 1u);
}

TEST(Orbit, Examples) {
  EXPECT_EQ(orbit(make(11, 2), 7), (OrbitRecord{7, 0, 1, 7}));
  EXPECT_EQ(orbit(make(7, 2), 5), (OrbitRecord{5, 1, 2, 4}));
  EXPECT_EQ(orbit(make(11, 2), 1), (OrbitRecord{1, 0, 5, 1}));
}

TEST(Orbit, ConsistentWithIteration) {
  std::mt19937_64 rng(3);
  for (u64 p : primes_in_range(3, 3000)) {
    const u64 g = 1 + rng() % (p - 1);
    const auto map = make(p, g);
    const u64 start = 1 + rng() % (p - 1);
    const auto rec = orbit(map, start);
    ASSERT_GE(rec.cycle_length, 1u);
    const u64 entry = map.iterate(start, rec.tail_length);
    ASSERT_EQ(entry, rec.entry_point);
    ASSERT_EQ(map.iterate(start, rec.tail_length + rec.cycle_length), entry);
    // least period: no earlier return
    for (u64 d = 1; d < rec.cycle_length; ++d) ASSERT_NE(map.iterate(entry, d), entry);
    // tail is exact: the point one step earlier is not cyclic
    if (rec.tail_length > 0) {
      const u64 before = map.iterate(start, rec.tail_length - 1);
      ASSERT_NE(map.iterate(before, rec.cycle_length), before);
    }
  }
}

TEST(CensusNaive, Examples) {
  const auto c1 = census_naive(make(11, 2), 3);
  EXPECT_EQ(c1.dividing(1), 1u);
  EXPECT_EQ(c1.dividing(2), 5u);
  EXPECT_EQ(c1.dividing(3), 1u);
  const auto c2 = census_naive(make(7, 3), 3);
  EXPECT_EQ(c2.n_dividing, (std::vector<u64>{0, 3, 3, 6}));
  const auto c3 = census_naive(make(101, 1), 6);
  for (std::size_t k = 1; k <= 6; ++k) EXPECT_EQ(c3.dividing(k), 1u);
  EXPECT_THROW(census_naive(make(7, 3), 0), InvalidInput);
}

TEST(CensusNaive, MatchesBruteForceOracle) {
  for (u64 p : primes_in_range(3, 400)) {
    for (u64 g = 1; g < p; g += 7) {
      const auto c = census_naive(make(p, g), 4);
      const auto expected = oracle::census(p, g, 4);
      ASSERT_EQ(c.n_dividing, expected) << p << " " << g;
    }
  }
}

TEST(CensusNaive, IndependentOfWorkerCount) {
  const auto map = make(10007, 5);
  const auto one = census_naive(map, 6, 1);
  EXPECT_EQ(census_naive(map, 6, 3), one);
  EXPECT_EQ(census_naive(map, 6, 8), one);
}

TEST(CensusGraph, Examples) {
  const auto [s1, c1] = census_graph(make(11, 2));
  EXPECT_EQ(s1.cycle_lengths, (std::map<u64, u64>{{1, 1}, {2, 2}, {5, 1}}));
  EXPECT_EQ(s1.component_count, 4u);
  EXPECT_TRUE(s1.is_permutation);
  EXPECT_EQ(c1.n_dividing, (std::vector<u64>{0, 1, 5, 1}));

  const auto [s2, c2] = census_graph(make(7, 2));
  EXPECT_EQ(s2.cycle_lengths, (std::map<u64, u64>{{2, 1}}));
  EXPECT_EQ(s2.cyclic_point_count, 2u);
  EXPECT_FALSE(s2.is_permutation);
  EXPECT_EQ(s2.max_tail_length, 2u);  // 3 -> 1 -> 2 -> 4
  EXPECT_EQ(c2.n_dividing, (std::vector<u64>{0, 0, 2, 0}));

  const auto [s3, c3] = census_graph(make(13, 1));
  EXPECT_EQ(s3.cycle_lengths, (std::map<u64, u64>{{1, 1}}));
  EXPECT_EQ(s3.component_count, 1u);
  EXPECT_EQ(s3.max_tail_length, 1u);
}

TEST(CensusGraph, CyclesReportedAsResidues) {
  std::set<u64> cyclic;
  graph_of(make(7, 2), [&](std::span<const u64> cycle) { cyclic.insert(cycle.begin(), cycle.end()); });
  EXPECT_EQ(cyclic, (std::set<u64>{2, 4}));
}

TEST(CensusGraph, MatchesNaiveOnAllSmallMaps) {
  for (u64 p : primes_in_range(3, 300)) {
    for (u64 g = 1; g < p; ++g) {
      const auto map = make(p, g);
      ASSERT_EQ(census_graph(map, 6).second, census_naive(map, 6)) << p << " " << g;
    }
  }
}

TEST(CensusGraph, SummaryInvariants) {
  std::mt19937_64 rng(5);
  for (u64 p : primes_in_range(3, 2000)) {
    const u64 g = 1 + rng() % (p - 1);
    const auto [s, c] = census_graph(make(p, g), 12);
    u64 total = 0, cycles = 0;
    for (auto [len, count] : s.cycle_lengths) {
      total += len * count;
      cycles += count;
    }
    ASSERT_EQ(total, s.cyclic_point_count);
    ASSERT_EQ(cycles, s.component_count);
    ASSERT_EQ(s.is_permutation, s.max_tail_length == 0);
    ASSERT_EQ(s.is_permutation, s.cyclic_point_count == p - 1);
    // divisor relations
    for (std::size_t k = 1; k <= 12; ++k) {
      u64 sum = 0;
      for (std::size_t d = 1; d <= k; ++d) {
        if (k % d == 0) sum += c.least_period(d);
      }
      ASSERT_EQ(c.dividing(k), sum);
      for (std::size_t m = k; m <= 12; m += k) ASSERT_LE(c.dividing(k), c.dividing(m));
    }
  }
}

TEST(CensusGraph, CyclicPointsLieInSubgroupGeneratedByG) {
  for (u64 p : primes_in_range(3, 600)) {
    const PrimeModulus m(p);
    const auto factors = factorize(p - 1);
    for (u64 g = 1; g < p; g += 5) {
      const u64 order = multiplicative_order(g, m, factors);
      graph_of(ExpMap(m, g), [&](std::span<const u64> cycle) {
        for (u64 u : cycle) ASSERT_EQ(pow_mod(u, order, p), 1u) << p << " " << g << " " << u;
      });
    }
  }
}

TEST(CensusGraph, PermutationExactlyForPrimitiveRoots) {
  for (u64 p : primes_in_range(3, 200)) {
    const PrimeModulus m(p);
    for (u64 g = 1; g < p; ++g) {
      ASSERT_EQ(graph_of(ExpMap(m, g)).is_permutation, multiplicative_order(g, m) == p - 1) << p << " " << g;
    }
  }
}

TEST(CensusGraph, RespectsMemoryBudget) {
  EXPECT_THROW(census_graph(make(10007, 5), 3, 1000), ResourceError);
  EXPECT_NO_THROW(census_graph(make(10007, 5), 3, functional_graph_bytes(10006)));
}

TEST(FixedPoints, Examples) {
  EXPECT_EQ(fixed_points(make(7, 3)), (std::vector<u64>{2, 4, 5}));
  EXPECT_EQ(fixed_points(make(11, 2)), (std::vector<u64>{7}));
  EXPECT_TRUE(fixed_points(make(7, 2)).empty());
}

TEST(FixedPoints, CardinalityIsFirstCensusEntry) {
  for (u64 p : primes_in_range(3, 500)) {
    for (u64 g = 1; g < p; g += 3) {
      const auto map = make(p, g);
      ASSERT_EQ(fixed_points(map).size(), census_graph(map, 1).second.dividing(1));
    }
  }
}

TEST(FunctionalGraph, HandlesLongChainsIteratively) {
  // i -> i - 1, 0 -> 0: a single tail of length n - 1
  const std::uint64_t n = 2'000'000;
  const auto s = analyze_functional_graph(n, [](std::uint32_t i) { return i == 0 ? 0u : i - 1; });
  EXPECT_EQ(s.component_count, 1u);
  EXPECT_EQ(s.max_tail_length, n - 1);
  EXPECT_EQ(s.cycle_lengths, (std::map<std::uint64_t, std::uint64_t>{{1, 1}}));
}

}  // namespace
}  // namespace expcycles
