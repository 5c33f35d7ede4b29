#pragma once

// The step algebra behind the chakravala cycle for x^2 - n y^2 = +-1, with n
// a nonsquare >= 2 throughout.
//
// For a modulus k with k^2 < n, a positive m is "best mod k" when it minimizes
// |m^2 - n| within its residue class mod k. Writing |m^2 - n| = k*k' and
// eps = sign(m^2 - n), the triple (k, m, k') with m best mod k is a *step*.
// Best-ness of m mod k is equivalent to each of
//   (2)  4 k'^2 + k^2 <= 4 n          (a condition on (k, k') alone)
//   (3)  2 m >= 2 k' + eps * k
// with strictness in one equivalent matching strictness in the others; ties
// happen only for even k, where exactly two class elements m- = k' - k/2 and
// m+ = k' + k/2 straddle sqrt(n) at equal distance (a *twin* pair).
//
// A step is *reduced* when m is also best mod k', i.e. when the reversed
// triple (k', m, k) is itself a step.

#include <compare>
#include <variant>
#include <vector>

#include "chakravala/arith.hpp"
#include "chakravala/errors.hpp"

namespace chakravala::steps {

using arith::integer_like;

enum class Cond { holds_strict, holds_equal, fails };

template <integer_like Int>
struct Step {
  Int k;
  Int m;
  Int kp;   // |m^2 - n| / k
  int eps;  // sign of m^2 - n

  friend bool operator==(const Step&, const Step&) = default;
};

// Orders steps by (k, m); within one n this is a strict total order because
// (k, m) determines kp and eps.
template <integer_like Int>
bool step_less(const Step<Int>& lhs, const Step<Int>& rhs) {
  if (lhs.k != rhs.k) return lhs.k < rhs.k;
  return lhs.m < rhs.m;
}

template <integer_like Int>
struct Strict {
  Int m;
  friend bool operator==(const Strict&, const Strict&) = default;
};

template <integer_like Int>
struct Twin {
  Int m_minus;  // the straddler below sqrt(n)
  Int m_plus;   // = m_minus + k, above sqrt(n)
  friend bool operator==(const Twin&, const Twin&) = default;
};

template <integer_like Int>
using BestChoice = std::variant<Strict<Int>, Twin<Int>>;

template <integer_like Int>
bool is_twin_choice(const BestChoice<Int>& choice) {
  return std::holds_alternative<Twin<Int>>(choice);
}

template <integer_like Int>
Int canonical_residue(const Int& x, const Int& k) {
  if (k < Int(1)) throw invalid_modulus("canonical_residue: modulus must be >= 1");
  Int r = Int(x % k);
  if (r < Int(0)) r = Int(r + k);
  return r;
}

namespace detail {

template <integer_like Int>
Int validated_sqrt_floor(const Int& n) {
  Int s = arith::isqrt(n);  // rejects n < 0
  if (s * s == n) throw nonsquare_required("n must be a nonsquare positive integer");
  return s;
}

}  // namespace detail

// The best m in the class r mod k, as the unique minimizer or the twin pair.
// Requires 1 <= k, k^2 < n, 0 <= r < k. Since k <= floor(sqrt(n)), the class
// always meets [1, floor(sqrt(n))], so both straddlers exist and are positive.
template <integer_like Int>
BestChoice<Int> select_best(const Int& n, const Int& k, const Int& r) {
  if (k < Int(1)) throw invalid_modulus("select_best: modulus must be >= 1");
  if (r < Int(0) || r >= k) throw invalid_input("select_best: residue out of range");
  Int s = detail::validated_sqrt_floor(n);
  if (!(k * k < n)) throw modulus_too_large("select_best: k^2 must be < n");
  Int m_lo = Int(s - canonical_residue(Int(s - r), k));  // largest class element <= s
  if (m_lo < Int(1)) throw internal_error("select_best: no positive candidate below sqrt(n)");
  Int m_hi = Int(m_lo + k);
  Int below = Int(n - m_lo * m_lo);
  Int above = Int(m_hi * m_hi - n);
  if (below < above) return Strict<Int>{m_lo};
  if (above < below) return Strict<Int>{m_hi};
  return Twin<Int>{m_lo, m_hi};
}

// Whether m >= 1 minimizes |x^2 - n| over its own class mod k. |x^2 - n| is
// strictly unimodal on x >= 0 (decreasing below sqrt(n), increasing above),
// so comparing against the two class neighbours m-k and m+k is conclusive.
template <integer_like Int>
bool is_best(const Int& n, const Int& k, const Int& m) {
  if (k < Int(1)) throw invalid_modulus("is_best: modulus must be >= 1");
  if (m < Int(1)) throw invalid_input("is_best: m must be >= 1");
  detail::validated_sqrt_floor(n);
  Int e = arith::abs_value(Int(m * m - n));
  if (m > k) {
    Int lower = Int(m - k);
    if (arith::abs_value(Int(lower * lower - n)) < e) return false;
  }
  Int upper = Int(m + k);
  return arith::abs_value(Int(upper * upper - n)) >= e;
}

// Condition (2): 4 k'^2 + k^2 <= 4 n, reported with strict/equal/fails.
template <integer_like Int>
Cond cond2(const Int& n, const Int& k, const Int& kp) {
  if (k < Int(1) || kp < Int(1)) throw invalid_modulus("cond2: k and k' must be >= 1");
  Int lhs = Int(Int(4) * kp * kp + k * k);
  Int rhs = Int(Int(4) * n);
  if (lhs < rhs) return Cond::holds_strict;
  if (lhs == rhs) return Cond::holds_equal;
  return Cond::fails;
}

// Condition (3): m >= k' + eps*k/2, evaluated exactly as 2m vs 2k' + eps*k.
template <integer_like Int>
Cond cond3(const Int& n, const Int& k, const Int& kp, const Int& m, int eps) {
  if (k < Int(1) || kp < Int(1)) throw invalid_modulus("cond3: k and k' must be >= 1");
  if (eps != 1 && eps != -1) throw invalid_input("cond3: eps must be +-1");
  detail::validated_sqrt_floor(n);
  Int lhs = Int(Int(2) * m);
  Int rhs = Int(Int(2) * kp + Int(eps) * k);
  if (lhs > rhs) return Cond::holds_strict;
  if (lhs == rhs) return Cond::holds_equal;
  return Cond::fails;
}

template <integer_like Int>
bool is_step(const Int& n, const Step<Int>& s) {
  detail::validated_sqrt_floor(n);
  if (s.k < Int(1) || s.m < Int(1) || s.kp < Int(1)) return false;
  if (!(s.k * s.k < n)) return false;
  Int d = Int(s.m * s.m - n);
  int eps = d > Int(0) ? 1 : -1;
  if (s.eps != eps) return false;
  if (arith::abs_value(d) != s.k * s.kp) return false;
  return is_best(n, s.k, s.m);
}

template <integer_like Int>
Step<Int> reverse(const Step<Int>& s) {
  return Step<Int>{s.kp, s.m, s.k, s.eps};
}

// A step is reduced iff its reverse is a step. Every step has kp^2 < n, so m
// best mod kp can be decided by condition (2) at modulus kp alone.
template <integer_like Int>
bool is_reduced(const Int& n, const Step<Int>& s) {
  if (!is_step(n, s)) return false;
  return cond2(n, s.kp, s.k) != Cond::fails;
}

// Successor steps of s = (k, m, k'): pick m' = -m mod k' best mod k' and form
// (k', m', |m'^2 - n| / k'). Twin choices yield two successors, minus branch
// first. m' = -m mod k' makes k' divide m'^2 - n, so the division is exact.
template <integer_like Int>
std::vector<Step<Int>> successor(const Int& n, const Step<Int>& s) {
  if (!is_step(n, s)) throw invalid_input("successor: not a step for this n");
  Int r = canonical_residue(Int(-s.m), s.kp);
  BestChoice<Int> choice = select_best(n, s.kp, r);
  std::vector<Step<Int>> out;
  auto push = [&](const Int& mp) {
    Int d = Int(mp * mp - n);
    out.push_back(Step<Int>{s.kp, mp, arith::exact_div(arith::abs_value(d), s.kp),
                            d > Int(0) ? 1 : -1});
  };
  if (const auto* twin = std::get_if<Twin<Int>>(&choice)) {
    push(twin->m_minus);
    push(twin->m_plus);
  } else {
    push(std::get<Strict<Int>>(choice).m);
  }
  return out;
}

}  // namespace chakravala::steps
