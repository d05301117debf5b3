#include <gtest/gtest.h>

#include <random>

#include "expcycles/modarith.hpp"
#include "oracles.hpp"

namespace expcycles {
namespace {

TEST(MulMod, SmallValues) {
  EXPECT_EQ(mul_mod(0, 5, 7), 0u);
  EXPECT_EQ(mul_mod(3, 5, 7), 1u);
}

TEST(MulMod, NearTopOfRange) {
  const u64 a = (1ULL << 62) - 1;
  const u64 m = (1ULL << 63) - 25;
  EXPECT_EQ(mul_mod(a, a, m), oracle::mul_mod(a, a, m));
  EXPECT_EQ(mul_mod(a, a, m), 2305843009213694078ULL);
}

TEST(MulMod, AgreesWithGmpOnRandomOperands) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const u64 m = (rng() >> 1) | 1;
    const u64 a = rng() % m, b = rng() % m;
    ASSERT_EQ(mul_mod(a, b, m), oracle::mul_mod(a, b, m)) << a << " " << b << " " << m;
  }
}

TEST(PowMod, Examples) {
  EXPECT_EQ(pow_mod(5, 0, 7), 1u);
  EXPECT_EQ(pow_mod(3, 5, 7), 5u);
  EXPECT_EQ(pow_mod(2, 10, 11), 1u);
  EXPECT_EQ(pow_mod(4, 0, 1), 0u);
}

TEST(PowMod, AgreesWithIteratedMultiplication) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const u64 m = 1 + rng() % 100'000;
    const u64 b = rng() % m;
    const u64 e = rng() % 10'001;
    ASSERT_EQ(pow_mod(b, e, m), oracle::pow_mod_slow(b, e, m));
  }
}

TEST(IsPrime, Examples) {
  EXPECT_FALSE(is_prime(0));
  EXPECT_FALSE(is_prime(1));
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(11));
  EXPECT_TRUE(is_prime(2003));
  EXPECT_FALSE(is_prime(2001));
}

TEST(IsPrime, AgreesWithTrialDivisionBelowOneMillion) {
  const auto sieve = primes_in_range(0, 1'000'000);
  std::vector<bool> prime(1'000'000, false);
  for (u64 p : sieve) prime[p] = true;
  // the sieve is itself checked against trial division on a stride
  for (u64 n = 0; n < 1'000'000; n += 97) ASSERT_EQ(prime[n], oracle::is_prime_trial(n)) << n;
  for (u64 n = 0; n < 1'000'000; ++n) ASSERT_EQ(is_prime(n), prime[n]) << n;
}

TEST(IsPrime, LargeKnownValues) {
  EXPECT_TRUE(is_prime(18446744073709551557ULL));  // largest 64-bit prime
  EXPECT_TRUE(is_prime((1ULL << 61) - 1));
  EXPECT_FALSE(is_prime(3215031751ULL));           // strong pseudoprime to 2, 3, 5, 7
  EXPECT_FALSE(is_prime(3825123056546413051ULL));  // strong pseudoprime to the first nine prime bases
  EXPECT_FALSE(is_prime(4294967297ULL));           // 641 * 6700417
}

TEST(PrimeModulus, RejectsNonPrimes) {
  EXPECT_THROW(PrimeModulus(4), InvalidInput);
  EXPECT_THROW(PrimeModulus(2), InvalidInput);
  EXPECT_THROW(PrimeModulus(1), InvalidInput);
  EXPECT_EQ(PrimeModulus(7).value(), 7u);
}

TEST(Factorize, RecoversProducts) {
  EXPECT_EQ(factorize(360), (std::vector<PrimePower>{{2, 3}, {3, 2}, {5, 1}}));
  const u64 big = 1000003ULL * 1000033ULL;  // both factors beyond the trial-division limit
  EXPECT_EQ(factorize(big), (std::vector<PrimePower>{{1000003, 1}, {1000033, 1}}));
  EXPECT_EQ(factorize((1ULL << 61) - 2), (std::vector<PrimePower>{{2, 1}, {3, 2}, {5, 2}, {7, 1}, {11, 1}, {13, 1},
                                                                  {31, 1}, {41, 1}, {61, 1}, {151, 1}, {331, 1},
                                                                  {1321, 1}}));
}

TEST(MultiplicativeOrder, Examples) {
  EXPECT_EQ(multiplicative_order(1, PrimeModulus(13)), 1u);
  EXPECT_EQ(multiplicative_order(2, PrimeModulus(7)), 3u);
  EXPECT_EQ(multiplicative_order(3, PrimeModulus(7)), 6u);
  EXPECT_THROW(multiplicative_order(7, PrimeModulus(7)), InvalidInput);
}

TEST(MultiplicativeOrder, DividesGroupOrderAndMatchesWalk) {
  for (u64 p : primes_in_range(3, 499)) {
    const PrimeModulus m(p);
    const auto factors = factorize(p - 1);
    for (u64 g = 1; g < p; ++g) {
      const u64 t = multiplicative_order(g, m, factors);
      ASSERT_EQ((p - 1) % t, 0u);
      ASSERT_EQ(t, oracle::order_by_walk(g, p)) << p << " " << g;
    }
  }
}

TEST(PrimitiveRoot, Examples) {
  EXPECT_EQ(primitive_root(PrimeModulus(7)), 3u);
  EXPECT_EQ(primitive_root(PrimeModulus(11)), 2u);
  EXPECT_EQ(primitive_root(PrimeModulus(5)), 2u);
  EXPECT_EQ(primitive_root(PrimeModulus(3)), 2u);
}

TEST(DiscreteLog, Examples) {
  EXPECT_EQ(discrete_log(3, 1, PrimeModulus(7)), 0u);
  EXPECT_EQ(discrete_log(3, 6, PrimeModulus(7)), 3u);
  EXPECT_EQ(discrete_log(2, 7, PrimeModulus(11)), 7u);
  EXPECT_THROW(discrete_log(2, 3, PrimeModulus(7)), InvalidInput);  // 2 has order 3 mod 7
}

TEST(DiscreteLog, InvertsPowModExhaustivelyBelow2000) {
  for (u64 p : primes_in_range(3, 1999)) {
    const PrimeModulus m(p);
    const DiscreteLog ind(primitive_root(m), m);
    for (u64 h = 1; h < p; ++h) {
      const u64 v = ind(h);
      ASSERT_LE(v, p - 2);
      ASSERT_EQ(pow_mod(ind.base(), v, p), h) << p << " " << h;
    }
  }
}

TEST(DiscreteLog, MatchesWalkOnSmallPrimes) {
  for (u64 p : {11ULL, 13ULL, 101ULL}) {
    const PrimeModulus m(p);
    const u64 g = primitive_root(m);
    for (u64 h = 1; h < p; ++h) EXPECT_EQ(discrete_log(g, h, m), oracle::log_by_walk(g, h, p));
  }
}

TEST(InverseMod, Basic) {
  EXPECT_EQ(*inverse_mod(3, 7), 5u);
  EXPECT_FALSE(inverse_mod(4, 8).has_value());
}

}  // namespace
}  // namespace expcycles
