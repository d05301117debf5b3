#pragma once

// Instance checkers for the exponent-folding identity, the floor-jump
// exceptional set, the interval-counting lemma on Z_n, and the objects of
// the 3-cycle counting argument (the exceptional set S and the map phi).

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "expcycles/bounds.hpp"
#include "expcycles/dynamics.hpp"
#include "expcycles/errors.hpp"
#include "expcycles/modarith.hpp"

namespace expcycles {

// ---------------------------------------------------------------------------
// Exponent folding: g^{u mod p} = g^{u - floor(u/p)} (mod p).

inline bool fact1_check(u64 u, u64 p, u64 g) {
  const u64 folded = u - u / p;
  return pow_mod(g, u % p, p) == pow_mod(g, folded, p);
}

// ---------------------------------------------------------------------------
// Floor jumps: floor((gy+g)/p) > floor((gy+1)/p) only for y in
// {floor(p/g), ..., floor((g-1)p/g), p-1}.

/// Sorted, exactly g elements for 1 <= g <= p-1.
inline std::vector<u64> fact2_exceptional_set(u64 p, u64 g) {
  std::vector<u64> out;
  out.reserve(g);
  for (u64 j = 1; j < g; ++j) out.push_back(static_cast<u64>(static_cast<u128>(j) * p / g));
  out.push_back(p - 1);
  return out;
}

inline bool fact2_antecedent(u64 p, u64 g, u64 y) {
  const u128 gy = static_cast<u128>(g) * y;
  return (gy + g) / p > (gy + 1) / p;
}

inline bool fact2_check(u64 p, u64 g, u64 y, std::span<const u64> exceptional) {
  return !fact2_antecedent(p, g, y) || std::binary_search(exceptional.begin(), exceptional.end(), y);
}

inline bool fact2_check(u64 p, u64 g, u64 y) {
  const auto set = fact2_exceptional_set(p, g);
  return fact2_check(p, g, y, set);
}

// ---------------------------------------------------------------------------
// Interval-counting lemma: for M, S in Z_n, C = {x in M : x (+)_n 1 in M} and
// phi : C\S -> Z_n\M with preimages of size <= k,
//     #M <= (k+1)/(k+2) n + #S/(k+2).

using ResidueSet = std::set<u64>;

struct CombLemmaInstance {
  u64 n = 0;
  ResidueSet M;
  ResidueSet S;
  u64 k = 2;
  std::map<u64, u64> phi;
};

struct CombResult {
  bool hypotheses_ok = false;
  bool bound_ok = false;
  /// The lemma: hypotheses imply the bound.
  bool consistent() const { return !hypotheses_ok || bound_ok; }
  friend bool operator==(const CombResult&, const CombResult&) = default;
};

/// a (+)_n b with representative in {0, ..., n-1}.
constexpr u64 add_wrap(u64 a, u64 b, u64 n) { return (a % n + b % n) % n; }

/// {x in M : x (+)_n 1 in M}.
inline ResidueSet comb_chain_set(u64 n, const ResidueSet& M) {
  ResidueSet c;
  for (u64 x : M) {
    if (M.count(add_wrap(x, 1, n))) c.insert(x);
  }
  return c;
}

/// C \ S, phi's required domain.
inline ResidueSet comb_phi_domain(u64 n, const ResidueSet& M, const ResidueSet& S) {
  ResidueSet out;
  for (u64 x : comb_chain_set(n, M)) {
    if (!S.count(x)) out.insert(x);
  }
  return out;
}

inline CombResult comb_verify(const CombLemmaInstance& inst) {
  if (inst.n == 0) throw MalformedInstance("comb_verify: n must be >= 1");
  if (inst.k < 1) throw MalformedInstance("comb_verify: k must be >= 1");
  auto inside = [&](const ResidueSet& s) { return s.empty() || *s.rbegin() < inst.n; };
  if (!inside(inst.M) || !inside(inst.S)) throw MalformedInstance("comb_verify: M and S must lie in Z_n");

  const ResidueSet domain = comb_phi_domain(inst.n, inst.M, inst.S);
  if (inst.phi.size() != domain.size() ||
      !std::equal(domain.begin(), domain.end(), inst.phi.begin(), [](u64 x, const auto& kv) { return x == kv.first; })) {
    throw MalformedInstance("comb_verify: phi's domain differs from C \\ S");
  }

  CombResult r;
  r.hypotheses_ok = true;
  std::map<u64, u64> preimage;
  for (const auto& [x, y] : inst.phi) {
    if (y >= inst.n) throw MalformedInstance("comb_verify: phi value outside Z_n");
    if (inst.M.count(y)) r.hypotheses_ok = false;
    if (++preimage[y] > inst.k) r.hypotheses_ok = false;
  }
  const u128 lhs = static_cast<u128>(inst.M.size()) * (inst.k + 2);
  const u128 rhs = static_cast<u128>(inst.k + 1) * inst.n + inst.S.size();
  r.bound_ok = lhs <= rhs;
  return r;
}

/// Random instance with n in [1, n_max] and k in [1, 4]. M is drawn either
/// as a Bernoulli subset or as runs separated by short gaps (the shape that
/// pushes #M towards the bound). When `want_valid`, phi respects the
/// hypotheses whenever capacity allows; otherwise phi is unconstrained over Z_n.
template <class Rng>
CombLemmaInstance random_comb_instance(Rng& rng, u64 n_max, bool want_valid = true) {
  auto uniform = [&](u64 lo, u64 hi) { return std::uniform_int_distribution<u64>(lo, hi)(rng); };
  auto coin = [&](double prob) { return std::bernoulli_distribution(prob)(rng); };

  CombLemmaInstance inst;
  inst.n = uniform(1, std::max<u64>(n_max, 1));
  inst.k = uniform(1, 4);
  if (coin(0.5)) {
    const double density = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (u64 x = 0; x < inst.n; ++x) {
      if (coin(density)) inst.M.insert(x);
    }
  } else {
    u64 x = uniform(0, inst.n - 1);
    u64 placed = 0;
    while (placed < inst.n) {
      const u64 run = uniform(1, 2 * inst.k + 2);
      for (u64 i = 0; i < run && placed < inst.n; ++i, ++placed) inst.M.insert((x + placed) % inst.n);
      placed += uniform(1, 2);
    }
  }
  const double s_density = std::uniform_real_distribution<double>(0.0, 0.3)(rng);
  for (u64 x = 0; x < inst.n; ++x) {
    if (coin(s_density)) inst.S.insert(x);
  }

  const ResidueSet domain = comb_phi_domain(inst.n, inst.M, inst.S);
  std::vector<u64> slots;
  if (want_valid) {
    for (u64 y = 0; y < inst.n; ++y) {
      if (!inst.M.count(y)) slots.insert(slots.end(), inst.k, y);
    }
    std::shuffle(slots.begin(), slots.end(), rng);
  }
  std::size_t next = 0;
  for (u64 x : domain) {
    inst.phi[x] = next < slots.size() ? slots[next++] : uniform(0, inst.n - 1);
  }
  return inst;
}

// ---------------------------------------------------------------------------
// 3-cycle counting argument for a primitive root g.

enum class MSemantics { least_period_3, period_dividing_3 };

inline const char* to_string(MSemantics s) {
  return s == MSemantics::least_period_3 ? "least" : "dividing";
}

/// Index part of S: {p-1, ind(p-1)} with {ind(floor(j p / g)) : 1 <= j < g}.
inline ResidueSet thm3_S(const DiscreteLog& ind) {
  const u64 p = ind.modulus().value();
  const u64 g = ind.base();
  ResidueSet s{p - 1, ind(p - 1)};
  for (u64 j = 1; j < g; ++j) s.insert(ind(static_cast<u64>(static_cast<u128>(j) * p / g)));
  return s;
}

inline ResidueSet thm3_S(PrimeModulus p, u64 g) { return thm3_S(DiscreteLog(g, p)); }

/// Periodic set M under the chosen semantics plus everything phi needs.
class Thm3Setup {
 public:
  Thm3Setup(PrimeModulus p, u64 g, MSemantics semantics)
      : map_(p, g), ind_(g, p), semantics_(semantics), in_m_(p.value(), 0) {
    graph_of(map_, [&](std::span<const u64> cycle) {
      const bool take = cycle.size() == 3 || (semantics_ == MSemantics::period_dividing_3 && cycle.size() == 1);
      if (!take) return;
      for (u64 u : cycle) {
        in_m_[u] = 1;
        m_.insert(u);
      }
    });
    c_ = comb_chain_set(p.value(), m_);
    s_index_ = thm3_S(ind_);
    for (u64 x : c_) {
      if (s_index_.count(x)) continue;
      if (branch_escapes_m(x)) continue;
      x_.insert(x);
    }
    s_ = s_index_;
    s_.insert(x_.begin(), x_.end());
  }

  const ExpMap& map() const { return map_; }
  const DiscreteLog& index() const { return ind_; }
  MSemantics semantics() const { return semantics_; }
  u64 p() const { return map_.p(); }

  bool in_m(u64 x) const { return x < in_m_.size() && in_m_[x]; }
  const ResidueSet& M() const { return m_; }
  const ResidueSet& C() const { return c_; }
  const ResidueSet& S_index() const { return s_index_; }
  /// Points of C outside the index part where the second branch of phi
  /// lands back in M; the empirical counterpart of the polynomial part of S.
  const ResidueSet& X() const { return x_; }
  const ResidueSet& S() const { return s_; }

  /// f(x) (+)_p 1.
  u64 shifted_image(u64 x) const { return add_wrap(map_.step(x), 1, p()); }

  /// f(f(f(x) (+)_p 1)) (+)_p 1; requires f(x) (+)_p 1 in M.
  u64 second_branch(u64 x) const {
    const u64 w = shifted_image(x);
    return add_wrap(map_.step(map_.step(w)), 1, p());
  }

 private:
  bool branch_escapes_m(u64 x) const {
    const u64 w = shifted_image(x);
    return !in_m(w) || !in_m(second_branch(x));
  }

  ExpMap map_;
  DiscreteLog ind_;
  MSemantics semantics_;
  std::vector<char> in_m_;
  ResidueSet m_, c_, s_index_, x_, s_;
};

/// phi(x) = f(x) (+)_p 1 if that is outside M, else f(f(f(x) (+)_p 1)) (+)_p 1.
inline u64 thm3_phi(const Thm3Setup& setup, u64 x) {
  if (!setup.C().count(x) || setup.S().count(x)) {
    throw InvalidInput("thm3_phi: x = " + std::to_string(x) + " outside C \\ S");
  }
  const u64 first = setup.shifted_image(x);
  return setup.in_m(first) ? setup.second_branch(x) : first;
}

/// Whether x satisfies x^g g^{-s} + 1 = (x+1)^{g^g} g^{-e} (mod p) for some
/// 0 <= s < g and 0 <= e < g^g.
inline bool thm3_in_congruence_family(const Thm3Setup& setup, u64 x) {
  const u64 p = setup.p();
  const u64 g = setup.map().g();
  const u64 order = p - 1;
  u128 gg = 1;
  for (u64 i = 0; i < g; ++i) {
    gg *= g;
    if (gg >= order) return true;  // every power of g is some g^{-e}
  }
  const u64 rhs_base = pow_mod(x + 1, static_cast<u64>(gg), p);
  if (rhs_base == 0) return false;
  const u64 rhs_inv = *inverse_mod(rhs_base, p);
  const u64 g_inv = *inverse_mod(g, p);
  u64 lhs_scale = 1;  // g^{-s}
  const u64 xg = pow_mod(x, g, p);
  for (u64 s = 0; s < g; ++s) {
    const u64 lhs = add_mod(mul_mod(xg, lhs_scale, p), 1, p);
    if (lhs != 0) {
      // lhs / rhs_base = g^{-e}  <=>  ind(lhs / rhs_base) = -e mod (p-1)
      const u64 idx = setup.index()(mul_mod(lhs, rhs_inv, p));
      const u64 e = (order - idx) % order;
      if (e < static_cast<u64>(gg)) return true;
    }
    lhs_scale = mul_mod(lhs_scale, g_inv, p);
  }
  return false;
}

struct Thm3ProofReport {
  u64 p = 0, g = 0;
  MSemantics semantics = MSemantics::least_period_3;
  ResidueSet M, C, S_index, X, S;
  bool phi_total = false;
  bool phi_lands_outside_M = false;
  u64 max_preimage = 0;
  /// Violations of: x, x(+)1, f(x)(+)1 in M and x outside S imply
  /// f(f(f(x)(+)1))(+)1 outside M.
  u64 key_claim_violations = 0;
  bool index_part_ok = false;  // #S_index <= g + 1
  bool x_size_ok = false;      // #X <= g^{2g+1}
  bool s_size_ok = false;      // #S <= g^{2g+1} + g + 1
  bool x_in_congruence_family = false;
  CombResult lemma;  // the interval lemma applied with n = p, k = 2
  bool bound_check = false;

  bool ok() const {
    return phi_total && phi_lands_outside_M && max_preimage <= 2 && key_claim_violations == 0 && index_part_ok &&
           x_size_ok && s_size_ok && x_in_congruence_family && lemma.consistent() && bound_check;
  }
};

/// Throws InvalidInput unless g is a primitive root mod p.
inline Thm3ProofReport thm3_verify(PrimeModulus p, u64 g, MSemantics semantics = MSemantics::least_period_3) {
  const Thm3Setup setup(p, g, semantics);
  Thm3ProofReport r;
  r.p = p.value();
  r.g = setup.map().g();
  r.semantics = semantics;
  r.M = setup.M();
  r.C = setup.C();
  r.S_index = setup.S_index();
  r.X = setup.X();
  r.S = setup.S();

  CombLemmaInstance inst{r.p, r.M, r.S, 2, {}};
  r.phi_total = true;
  for (u64 x : comb_phi_domain(r.p, r.M, r.S)) {
    try {
      inst.phi[x] = thm3_phi(setup, x);
    } catch (const InvalidInput&) {
      r.phi_total = false;
    }
  }
  r.phi_lands_outside_M = std::none_of(inst.phi.begin(), inst.phi.end(),
                                       [&](const auto& kv) { return setup.in_m(kv.second); });
  std::map<u64, u64> preimage;
  for (const auto& kv : inst.phi) r.max_preimage = std::max(r.max_preimage, ++preimage[kv.second]);
  if (r.phi_total) r.lemma = comb_verify(inst);

  for (u64 x = 0; x < r.p; ++x) {
    if (r.S.count(x) || !setup.in_m(x) || !setup.in_m(add_wrap(x, 1, r.p))) continue;
    if (!setup.in_m(setup.shifted_image(x))) continue;
    if (setup.in_m(setup.second_branch(x))) ++r.key_claim_violations;
  }

  const BigInt g_big(r.g);
  const BigInt x_cap = r.g > 64 ? BigInt(-1) : boost::multiprecision::pow(g_big, static_cast<unsigned>(2 * r.g + 1));
  r.index_part_ok = r.S_index.size() <= r.g + 1;
  r.x_size_ok = x_cap < 0 || BigInt(r.X.size()) <= x_cap;
  r.s_size_ok = x_cap < 0 || BigInt(r.S.size()) <= x_cap + r.g + 1;

  r.x_in_congruence_family = std::all_of(r.X.begin(), r.X.end(),
                                         [&](u64 x) { return thm3_in_congruence_family(setup, x); });

  const u128 lhs = static_cast<u128>(r.M.size()) * 4;
  const u128 rhs = static_cast<u128>(3) * r.p + r.S.size();
  r.bound_check = lhs <= rhs;
  return r;
}

}  // namespace expcycles
