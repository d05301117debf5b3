#pragma once

// Elliptic-curve analogue of repeated exponentiation: u -> x(uG) mod N on a
// short Weierstrass curve Y^2 = X^3 + aX + b over F_p, N = #E(F_p).

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "expcycles/errors.hpp"
#include "expcycles/graph.hpp"
#include "expcycles/modarith.hpp"
#include "expcycles/parallel.hpp"

namespace expcycles {

class CurveParams {
 public:
  /// Requires p >= 5 prime and 4a^3 + 27b^2 != 0 (mod p).
  CurveParams(PrimeModulus p, u64 a, u64 b) : p_(p), a_(a % p.value()), b_(b % p.value()) {
    if (p.value() < 5) throw InvalidInput("curve: p must be >= 5");
    const u64 m = p.value();
    const u64 disc = add_mod(mul_mod(4, pow_mod(a_, 3, m), m), mul_mod(27, mul_mod(b_, b_, m), m), m);
    if (disc == 0) throw InvalidInput("curve: singular (4a^3 + 27b^2 = 0 mod p)");
  }

  PrimeModulus modulus() const noexcept { return p_; }
  u64 p() const noexcept { return p_.value(); }
  u64 a() const noexcept { return a_; }
  u64 b() const noexcept { return b_; }

  /// x^3 + a x + b mod p.
  u64 rhs(u64 x) const noexcept {
    const u64 m = p_.value();
    return add_mod(add_mod(pow_mod(x, 3, m), mul_mod(a_, x, m), m), b_, m);
  }

 private:
  PrimeModulus p_;
  u64 a_, b_;
};

/// The point at infinity or an affine point.
struct CurvePoint {
  bool infinity = true;
  u64 x = 0, y = 0;

  static CurvePoint at_infinity() { return {}; }
  static CurvePoint affine(u64 x, u64 y) { return {false, x, y}; }

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

inline bool on_curve(const CurveParams& curve, const CurvePoint& P) {
  if (P.infinity) return true;
  if (P.x >= curve.p() || P.y >= curve.p()) return false;
  return mul_mod(P.y, P.y, curve.p()) == curve.rhs(P.x);
}

inline CurvePoint negate(const CurveParams& curve, const CurvePoint& P) {
  if (P.infinity || P.y == 0) return P;
  return CurvePoint::affine(P.x, curve.p() - P.y);
}

/// Chord-and-tangent addition in affine coordinates.
inline CurvePoint point_add(const CurveParams& curve, const CurvePoint& P, const CurvePoint& Q) {
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  const u64 m = curve.p();
  u64 slope = 0;
  if (P.x == Q.x) {
    if (add_mod(P.y, Q.y, m) == 0) return CurvePoint::at_infinity();
    // doubling: (3x^2 + a) / 2y
    const u64 num = add_mod(mul_mod(3, mul_mod(P.x, P.x, m), m), curve.a(), m);
    slope = mul_mod(num, *inverse_mod(add_mod(P.y, P.y, m), m), m);
  } else {
    const u64 num = add_mod(Q.y, m - P.y, m);
    const u64 den = add_mod(Q.x, m - P.x, m);
    slope = mul_mod(num, *inverse_mod(den, m), m);
  }
  const u64 x3 = add_mod(mul_mod(slope, slope, m), m - add_mod(P.x, Q.x, m), m);
  const u64 y3 = add_mod(mul_mod(slope, add_mod(P.x, m - x3, m), m), m - P.y, m);
  return CurvePoint::affine(x3, y3);
}

/// Double-and-add; 0 P = O.
inline CurvePoint scalar_mul(const CurveParams& curve, u64 k, CurvePoint P) {
  CurvePoint acc = CurvePoint::at_infinity();
  while (k != 0) {
    if (k & 1) acc = point_add(curve, acc, P);
    P = point_add(curve, P, P);
    k >>= 1;
  }
  return acc;
}

inline constexpr u64 kDefaultCurveSweepLimit = 100'000'000;

/// Legendre symbol as -1, 0, 1.
inline int quadratic_character(u64 v, u64 p) {
  v %= p;
  if (v == 0) return 0;
  return pow_mod(v, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/// N = 1 + sum_x (1 + chi(x^3 + a x + b)) by an O(p) sweep.
inline u64 curve_order(const CurveParams& curve, u64 sweep_limit = kDefaultCurveSweepLimit) {
  if (curve.p() > sweep_limit) throw ResourceError("curve_order: p exceeds the sweep budget");
  std::int64_t n = 1;
  for (u64 x = 0; x < curve.p(); ++x) n += 1 + quadratic_character(curve.rhs(x), curve.p());
  return static_cast<u64>(n);
}

/// |N - (p+1)| <= 2 sqrt(p), tested exactly as (N - p - 1)^2 <= 4p.
inline bool within_hasse(u64 n, u64 p) {
  const std::int64_t t = static_cast<std::int64_t>(n) - static_cast<std::int64_t>(p) - 1;
  return static_cast<u128>(t < 0 ? -t : t) * static_cast<u128>(t < 0 ? -t : t) <= static_cast<u128>(4) * p;
}

/// All points of E(F_p), O first, affine points in lexicographic order.
inline std::vector<CurvePoint> curve_points(const CurveParams& curve) {
  std::vector<CurvePoint> pts{CurvePoint::at_infinity()};
  const u64 m = curve.p();
  for (u64 x = 0; x < m; ++x) {
    const u64 r = curve.rhs(x);
    for (u64 y = 0; y < m; ++y) {
      if (mul_mod(y, y, m) == r) pts.push_back(CurvePoint::affine(x, y));
    }
  }
  return pts;
}

/// F_G(u) = x(uG) mod N on {0, ..., N-1}; the point at infinity maps to 0.
class ECExpMap {
 public:
  ECExpMap(CurveParams curve, CurvePoint generator, u64 sweep_limit = kDefaultCurveSweepLimit)
      : curve_(curve), G_(generator) {
    if (G_.infinity) throw InvalidInput("ec map: G must not be the point at infinity");
    if (!on_curve(curve_, G_)) throw InvalidInput("ec map: G not on curve");
    order_ = curve_order(curve_, sweep_limit);
    if (!scalar_mul(curve_, order_, G_).infinity) throw InvalidInput("ec map: N G != O");  // Lagrange
  }

  const CurveParams& curve() const noexcept { return curve_; }
  const CurvePoint& generator() const noexcept { return G_; }
  u64 N() const noexcept { return order_; }
  bool hasse_ok() const { return within_hasse(order_, curve_.p()); }

  u64 apply(u64 u) const {
    if (u >= order_) throw InvalidInput("ec_apply: u = " + std::to_string(u) + " outside {0, ..., N-1}");
    return step(u);
  }

  u64 step(u64 u) const {
    const CurvePoint P = scalar_mul(curve_, u, G_);
    return P.infinity ? 0 : P.x % order_;
  }

 private:
  CurveParams curve_;
  CurvePoint G_;
  u64 order_ = 0;
};

inline u64 ec_apply(const ECExpMap& map, u64 u) { return map.apply(u); }

/// Counts u0 in {1, ..., N-1} with u_k = u0, by direct iteration.
inline CycleCensus ec_census(const ECExpMap& map, std::size_t k_max, unsigned workers = 1) {
  if (k_max < 1) throw InvalidInput("k_max must be >= 1");
  const u64 starts = map.N() - 1;
  const unsigned blocks = std::max(1u, workers);
  std::vector<std::vector<u64>> dividing(blocks, std::vector<u64>(k_max + 1, 0));
  std::vector<std::vector<u64>> least(blocks, std::vector<u64>(k_max + 1, 0));
  parallel_blocks(starts, blocks, [&](std::size_t begin, std::size_t end, std::size_t b) {
    for (std::size_t i = begin; i < end; ++i) {
      const u64 u0 = i + 1;
      u64 x = u0;
      bool seen = false;
      for (std::size_t k = 1; k <= k_max; ++k) {
        x = map.step(x);
        if (x == u0) {
          ++dividing[b][k];
          if (!seen) ++least[b][k];
          seen = true;
        }
      }
    }
  });
  CycleCensus c;
  c.k_max = k_max;
  c.n_dividing.assign(k_max + 1, 0);
  c.n_least_period.assign(k_max + 1, 0);
  for (unsigned b = 0; b < blocks; ++b) {
    for (std::size_t k = 1; k <= k_max; ++k) {
      c.n_dividing[k] += dividing[b][k];
      c.n_least_period[k] += least[b][k];
    }
  }
  return c;
}

/// Functional graph of F_G on the whole of {0, ..., N-1}, including the
/// fixed point 0 contributed by the point at infinity.
inline FunctionalGraphSummary ec_graph(const ECExpMap& map) {
  std::vector<std::uint32_t> table(map.N());
  for (u64 u = 0; u < map.N(); ++u) table[u] = static_cast<std::uint32_t>(map.step(u));
  return analyze_functional_graph(table.size(), [&](std::uint32_t i) { return table[i]; });
}

/// Census over initial values {1, ..., N-1} derived from ec_graph.
inline CycleCensus ec_census_graph(const ECExpMap& map, std::size_t k_max) {
  auto census = ec_graph(map).census(k_max);
  // u = 0 is always a fixed point (0 G = O -> 0) but not an initial value
  census.n_least_period[1] -= 1;
  for (std::size_t k = 1; k <= k_max; ++k) census.n_dividing[k] -= 1;
  return census;
}

}  // namespace expcycles
