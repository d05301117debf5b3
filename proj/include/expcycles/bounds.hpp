#pragma once

// Explicit upper bounds for the number of fixed points, 2-periodic and
// 3-periodic points of u -> g^u mod p, and a harness checking them against
// exact censuses.

#include <boost/multiprecision/cpp_int.hpp>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <optional>
#include <string>

#include "expcycles/dynamics.hpp"
#include "expcycles/errors.hpp"
#include "expcycles/graph.hpp"
#include "expcycles/modarith.hpp"

namespace expcycles {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// sqrt(2p) + 1/2. The guarantee needs p >= 11; see thm1_applicable.
inline double thm1_bound(u64 p) { return std::sqrt(2.0 * static_cast<double>(p)) + 0.5; }

inline constexpr bool thm1_applicable(u64 p) { return p >= 11; }

/// Exact test of count <= sqrt(2p) + 1/2, i.e. (2 count - 1)^2 <= 8p.
inline bool thm1_admits(u64 p, u64 count) {
  if (count == 0) return true;
  const u128 lhs = static_cast<u128>(2 * count - 1) * (2 * count - 1);
  return lhs <= static_cast<u128>(8) * p;
}

struct Thm2Bound {
  u64 z = 0;
  BigInt value;
};

/// z = ceil(log p / (3 log g)), computed exactly as the least z >= 1 with
/// g^{3z} >= p. For prime p and g >= 2, g^{3z} = p never happens, so the
/// ratio is never an integer and the choice of logarithm base is immaterial.
inline u64 thm2_z(u64 p, u64 g) {
  if (g < 2) throw InvalidInput("thm2_z: g must be >= 2");
  const BigInt cube = BigInt(g) * g * g;
  BigInt power = cube;
  u64 z = 1;
  while (power < p) {
    power *= cube;
    ++z;
  }
  return z;
}

/// ceil(2p/z) + 2 + 2 g^{2z}, the explicit constant behind N_g(2) <= C(g) p / log p.
inline Thm2Bound thm2_bound_explicit(u64 p, u64 g) {
  const u64 z = thm2_z(p, g);
  Thm2Bound out;
  out.z = z;
  const BigInt two_p = BigInt(2) * p;
  const BigInt ceil_div = (two_p + (z - 1)) / z;
  out.value = ceil_div + 2 + 2 * boost::multiprecision::pow(BigInt(g), static_cast<unsigned>(2 * z));
  return out;
}

/// (3p + g^{2g+1} + g + 1) / 4 exactly. Cost grows like g log g bits.
inline BigRational thm3_bound(u64 p, u64 g) {
  if (g < 1) throw InvalidInput("thm3_bound: g must be >= 1");
  if (g > (1ULL << 20)) throw ResourceError("thm3_bound: g^{2g+1} too large to evaluate exactly");
  const BigInt power = boost::multiprecision::pow(BigInt(g), static_cast<unsigned>(2 * g + 1));
  return BigRational(BigInt(3) * p + power + g + 1, 4);
}

/// A bound carried exactly while it fits in `kExactBits` bits; beyond that
/// only a certified lower bound 2^log2_floor is kept, which is still enough
/// to decide count <= bound exactly for any 64-bit count.
struct BoundValue {
  static constexpr u64 kExactBits = 256;

  std::optional<BigRational> exact;
  u64 log2_floor = 0;
  double log2_approx = 0.0;

  bool admits(u64 count) const {
    if (exact) return BigRational(count) <= *exact;
    return log2_floor >= 64;
  }
  bool exceeds(u64 v) const { return exact ? *exact > BigRational(v) : log2_floor >= 64; }

  /// Exact decimal (quarters always terminate) or "2^x" when not exact.
  std::string to_string() const {
    if (!exact) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "2^%.3f", log2_approx);
      return buf;
    }
    const BigInt num = boost::multiprecision::numerator(*exact);
    const BigInt den = boost::multiprecision::denominator(*exact);
    BigInt whole = num / den;
    BigInt rem = num % den;
    std::string s = whole.str();
    if (rem != 0) {
      s += '.';
      // den divides a power of ten here (den in {1, 2, 4})
      while (rem != 0) {
        rem *= 10;
        s += static_cast<char>('0' + static_cast<int>(rem / den));
        rem %= den;
      }
    }
    return s;
  }
};

/// Period-3 bound for reports: exact up to BoundValue::kExactBits.
inline BoundValue thm3_bound_value(u64 p, u64 g) {
  BoundValue out;
  const u64 exponent = 2 * g + 1;
  const u64 floor_log2_g = static_cast<u64>(std::bit_width(g) - 1);
  out.log2_approx = static_cast<double>(exponent) * std::log2(static_cast<double>(g));
  if (floor_log2_g != 0 && exponent > BoundValue::kExactBits / floor_log2_g) {
    // g^{2g+1} >= 2^{(2g+1) floor(log2 g)} > 2^kExactBits, and that term alone exceeds 4 * 2^64
    out.log2_floor = BoundValue::kExactBits - 2;
    return out;
  }
  out.exact = thm3_bound(p, g);
  out.log2_approx = std::log2(out.exact->convert_to<double>());
  return out;
}

struct BoundReport {
  u64 p = 0, g = 0;
  u64 n1 = 0, n2 = 0;
  u64 n3 = 0;        // least period divides 3
  u64 n3_least = 0;  // least period exactly 3

  double thm1 = 0.0;
  bool thm1_applicable = false;
  bool thm1_ok = false;
  bool thm1_vacuous = false;

  std::optional<Thm2Bound> thm2;  // absent for g = 1, where N_1(2) = 1
  bool thm2_ok = false;
  bool thm2_vacuous = false;

  BoundValue thm3;
  bool thm3_ok = false;        // period-dividing count
  bool thm3_least_ok = false;  // least-period count
  bool thm3_vacuous = false;

  CycleCensus census;
  std::optional<FunctionalGraphSummary> graph;

  /// A bound whose hypotheses hold is exceeded.
  bool violated() const { return (thm1_applicable && !thm1_ok) || !thm2_ok || !thm3_ok || !thm3_least_ok; }
};

struct VerifyOptions {
  std::size_t k_max = 3;
  u64 memory_budget = kDefaultMemoryBudget;
};

/// Exact census (graph route when it fits the budget, naive otherwise) plus
/// every bound and its satisfaction flag.
inline BoundReport verify(const ExpMap& map, const VerifyOptions& opts = {}) {
  BoundReport r;
  r.p = map.p();
  r.g = map.g();
  const std::size_t k_max = std::max<std::size_t>(opts.k_max, 3);
  const u64 nodes = map.p() - 1;
  if (nodes <= kMaxGraphNodes && functional_graph_bytes(nodes) <= opts.memory_budget) {
    auto [summary, census] = census_graph(map, k_max, opts.memory_budget);
    r.graph = std::move(summary);
    r.census = std::move(census);
  } else {
    r.census = census_naive(map, k_max);
  }
  r.n1 = r.census.dividing(1);
  r.n2 = r.census.dividing(2);
  r.n3 = r.census.dividing(3);
  r.n3_least = r.census.least_period(3);
  const u64 domain = map.p() - 1;

  r.thm1 = thm1_bound(r.p);
  r.thm1_applicable = thm1_applicable(r.p);
  r.thm1_ok = thm1_admits(r.p, r.n1);
  r.thm1_vacuous = r.thm1 > static_cast<double>(domain);

  if (r.g >= 2) {
    r.thm2 = thm2_bound_explicit(r.p, r.g);
    // the displayed value rounds 2p/z up; the test itself is exact
    const BigInt tail = r.thm2->value - (BigInt(2) * r.p + (r.thm2->z - 1)) / r.thm2->z;
    r.thm2_ok = (BigInt(r.n2) - tail) * r.thm2->z <= BigInt(2) * r.p;
    r.thm2_vacuous = r.thm2->value > domain;
  } else {
    r.thm2_ok = r.n2 <= 1;
  }

  r.thm3 = thm3_bound_value(r.p, r.g);
  r.thm3_ok = r.thm3.admits(r.n3);
  r.thm3_least_ok = r.thm3.admits(r.n3_least);
  r.thm3_vacuous = r.thm3.exceeds(domain);
  return r;
}

}  // namespace expcycles
