#pragma once

// Exact modular arithmetic on 64-bit unsigned integers: products, powers,
// primality, factorization, multiplicative order, primitive roots and
// baby-step giant-step discrete logarithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "expcycles/errors.hpp"

namespace expcycles {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 mul_mod(u64 a, u64 b, u64 m) noexcept {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 add_mod(u64 a, u64 b, u64 m) noexcept {
  // requires a, b < m
  return a >= m - b ? a - (m - b) : a + b;
}

/// Square-and-multiply. pow_mod(b, 0, m) == 1 % m.
constexpr u64 pow_mod(u64 base, u64 exp, u64 m) noexcept {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Modular inverse by extended Euclid; nullopt when gcd(a, m) != 1.
inline std::optional<u64> inverse_mod(u64 a, u64 m) {
  if (m == 0) return std::nullopt;
  std::int64_t t = 0, new_t = 1;
  u64 r = m, new_r = a % m;
  while (new_r != 0) {
    const u64 q = r / new_r;
    const std::int64_t tmp_t = t - static_cast<std::int64_t>(q) * new_t;
    t = new_t;
    new_t = tmp_t;
    const u64 tmp_r = r - q * new_r;
    r = new_r;
    new_r = tmp_r;
  }
  if (r != 1) return std::nullopt;
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<u64>(t);
}

namespace detail {

inline bool miller_rabin_witness(u64 n, u64 d, int s, u64 a) {
  a %= n;
  if (a == 0) return false;
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace detail

/// Deterministic for all 64-bit n (Sinclair's seven-base witness set).
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  if (n < 37 * 37) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    if (detail::miller_rabin_witness(n, d, s, a)) return false;
  }
  return true;
}

/// Smallest prime >= n (n < 2^63).
inline u64 next_prime(u64 n) {
  if (n <= 2) return 2;
  if ((n & 1) == 0) ++n;
  while (!is_prime(n)) n += 2;
  return n;
}

/// Odd prime p with 3 <= p < 2^63.
class PrimeModulus {
 public:
  explicit PrimeModulus(u64 p) : p_(p) {
    if (p < 3 || p >= (1ULL << 63) || !is_prime(p)) {
      throw InvalidInput("p not prime: " + std::to_string(p) + " (need an odd prime below 2^63)");
    }
  }

  constexpr u64 value() const noexcept { return p_; }
  constexpr operator u64() const noexcept { return p_; }  // NOLINT: used as a plain modulus

  friend constexpr bool operator==(PrimeModulus, PrimeModulus) = default;

 private:
  u64 p_;
};

struct PrimePower {
  u64 prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

namespace detail {

inline u64 pollard_brent(u64 n, u64 c) {
  auto step = [&](u64 x) { return add_mod(mul_mod(x, x, n), c, n); };
  u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
  const u64 block = 128;
  u64 r = 1;
  do {
    x = y;
    for (u64 i = 0; i < r; ++i) y = step(y);
    u64 k = 0;
    do {
      ys = y;
      for (u64 i = 0; i < std::min(block, r - k); ++i) {
        y = step(y);
        q = mul_mod(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
      k += block;
    } while (k < r && g == 1);
    r <<= 1;
  } while (g == 1);
  if (g == n) {
    do {
      ys = step(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

inline void factor_rec(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (u64 c = 1;; ++c) {
    const u64 d = pollard_brent(n, c);
    if (d != n) {
      factor_rec(d, out);
      factor_rec(n / d, out);
      return;
    }
  }
}

}  // namespace detail

/// Trial division up to 10^6, then Pollard-Brent rho on the cofactor.
inline std::vector<PrimePower> factorize(u64 n) {
  std::vector<u64> primes;
  constexpr u64 kTrialLimit = 1'000'000;
  for (u64 q = 2; q <= kTrialLimit && q * q <= n; q += (q == 2 ? 1 : 2)) {
    while (n % q == 0) {
      primes.push_back(q);
      n /= q;
    }
  }
  if (n > 1) detail::factor_rec(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> out;
  for (u64 q : primes) {
    if (!out.empty() && out.back().prime == q) {
      ++out.back().exponent;
    } else {
      out.push_back({q, 1});
    }
  }
  return out;
}

/// Order of g modulo p given the factorization of p - 1.
inline u64 multiplicative_order(u64 g, PrimeModulus p, const std::vector<PrimePower>& group_order_factors) {
  g %= p.value();
  if (g == 0) throw InvalidInput("multiplicative_order: gcd(g, p) != 1");
  u64 order = p.value() - 1;
  for (const auto& [q, e] : group_order_factors) {
    for (unsigned i = 0; i < e; ++i) {
      if (pow_mod(g, order / q, p) != 1) break;
      order /= q;
    }
  }
  return order;
}

inline u64 multiplicative_order(u64 g, PrimeModulus p) {
  return multiplicative_order(g, p, factorize(p.value() - 1));
}

inline bool is_primitive_root(u64 g, PrimeModulus p, const std::vector<PrimePower>& group_order_factors) {
  g %= p.value();
  if (g == 0) return false;
  for (const auto& pp : group_order_factors) {
    if (pow_mod(g, (p.value() - 1) / pp.prime, p) == 1) return false;
  }
  return true;
}

inline bool is_primitive_root(u64 g, PrimeModulus p) {
  return is_primitive_root(g, p, factorize(p.value() - 1));
}

/// Smallest g >= 2 generating the multiplicative group mod p.
inline u64 primitive_root(PrimeModulus p) {
  const auto factors = factorize(p.value() - 1);
  for (u64 g = 2; g < p.value(); ++g) {
    if (is_primitive_root(g, p, factors)) return g;
  }
  throw InvalidInput("primitive_root: no generator found");  // unreachable for prime p
}

/// Baby-step giant-step table for a fixed primitive root. Build once, query
/// many times; each query costs O(sqrt p) multiplications.
class DiscreteLog {
 public:
  DiscreteLog(u64 g, PrimeModulus p) : g_(g % p.value()), p_(p) {
    if (!is_primitive_root(g_, p_)) {
      throw InvalidInput("discrete_log: " + std::to_string(g) + " is not a primitive root mod " +
                         std::to_string(p.value()));
    }
    const u64 order = p_.value() - 1;
    step_ = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(order))));
    while (step_ * step_ < order) ++step_;
    baby_.reserve(step_ * 2);
    u64 power = 1;
    for (u64 j = 0; j < step_; ++j) {
      baby_.try_emplace(power, j);
      power = mul_mod(power, g_, p_);
    }
    // g^{-step}
    giant_ = pow_mod(g_, order - step_ % order, p_);
  }

  /// ind_g(h) in {0, ..., p-2}.
  u64 operator()(u64 h) const {
    h %= p_.value();
    if (h == 0) throw InvalidInput("discrete_log: h must be nonzero mod p");
    u64 gamma = h;
    for (u64 i = 0; i < step_; ++i) {
      if (auto it = baby_.find(gamma); it != baby_.end()) {
        return (i * step_ + it->second) % (p_.value() - 1);
      }
      gamma = mul_mod(gamma, giant_, p_);
    }
    throw InvalidInput("discrete_log: no logarithm found");  // unreachable for a generator
  }

  u64 base() const noexcept { return g_; }
  PrimeModulus modulus() const noexcept { return p_; }

 private:
  u64 g_;
  PrimeModulus p_;
  u64 step_ = 0;
  u64 giant_ = 1;
  std::unordered_map<u64, u64> baby_;
};

inline u64 discrete_log(u64 g, u64 h, PrimeModulus p) { return DiscreteLog(g, p)(h); }

/// All primes in [lo, hi] by a plain sieve (hi desk-scale).
inline std::vector<u64> primes_in_range(u64 lo, u64 hi) {
  std::vector<u64> out;
  if (hi < 2 || lo > hi) return out;
  std::vector<bool> composite(hi + 1, false);
  for (u64 i = 2; i * i <= hi; ++i) {
    if (composite[i]) continue;
    for (u64 j = i * i; j <= hi; j += i) composite[j] = true;
  }
  for (u64 i = std::max<u64>(lo, 2); i <= hi; ++i) {
    if (!composite[i]) out.push_back(i);
  }
  return out;
}

}  // namespace expcycles
