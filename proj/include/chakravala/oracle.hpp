#pragma once

// Independent cross-checks for the solver. Everything here recomputes results
// straight from definitions (exhaustive scans, the classical P/Q continued
// fraction recurrence, unit-group power descent) and deliberately shares no
// algorithm with steps/engine; from those headers only the plain data shapes
// (BestChoice, PellSolution) are reused.

#include <cstddef>
#include <optional>

#include "chakravala/arith.hpp"
#include "chakravala/errors.hpp"
#include "chakravala/solution.hpp"
#include "chakravala/steps.hpp"

namespace chakravala::oracle {

using arith::integer_like;

struct OracleBudget {
  // Largest y tried by the solution scan.
  unsigned long long y_limit = 100000;
  // The best-m scan covers its class up to scan_window * (isqrt(n) + 1).
  unsigned scan_window = 2;
};

// Smallest-y solution of x^2 - n y^2 = +-1 with y <= budget.y_limit, or
// nullopt when none exists in that range. For each y at most one sign can
// match (two squares cannot differ by 2), so smallest y is unambiguous.
template <integer_like Int>
std::optional<PellSolution<Int>> brute_force_pell(const Int& n,
                                                  const OracleBudget& budget = {}) {
  if (n < Int(2) || arith::is_square(n))
    throw nonsquare_required("n must be a nonsquare positive integer");
  if (budget.y_limit < 1) throw invalid_input("brute_force_pell: y_limit must be >= 1");
  const Int limit(static_cast<long long>(budget.y_limit));
  for (Int y(1); y <= limit; ++y) {
    Int ny2 = Int(n * y * y);
    Int up = Int(ny2 + Int(1));
    if (arith::is_square(up)) return PellSolution<Int>{arith::isqrt(up), y, 1};
    Int down = Int(ny2 - Int(1));
    if (arith::is_square(down)) return PellSolution<Int>{arith::isqrt(down), y, -1};
  }
  return std::nullopt;
}

// Best m in the class r mod k by plain scan of every class element up to
// scan_window * (isqrt(n) + 1). |m^2 - n| grows monotonically past sqrt(n),
// so a window that crosses sqrt(n) is conclusive; anything smaller is a
// budget error. Ties are reported as the twin pair.
template <integer_like Int>
steps::BestChoice<Int> brute_force_best(const Int& n, const Int& k, const Int& r,
                                        const OracleBudget& budget = {}) {
  if (k < Int(1)) throw invalid_modulus("brute_force_best: modulus must be >= 1");
  if (r < Int(0) || r >= k) throw invalid_input("brute_force_best: residue out of range");
  if (n < Int(2) || arith::is_square(n))
    throw nonsquare_required("n must be a nonsquare positive integer");
  if (!(k * k < n)) throw modulus_too_large("brute_force_best: k^2 must be < n");
  Int bound = Int(Int(static_cast<long long>(budget.scan_window)) * Int(arith::isqrt(n) + Int(1)));
  if (bound * bound <= n)
    throw budget_error("brute_force_best: scan window does not cross sqrt(n)");
  Int first = r == Int(0) ? k : r;  // smallest positive class element
  std::optional<Int> best_err;
  Int lo(0), hi(0);
  bool tie = false;
  for (Int m = first; m <= bound; m = Int(m + k)) {
    Int err = arith::abs_value(Int(m * m - n));
    if (!best_err || err < *best_err) {
      best_err = err;
      lo = m;
      tie = false;
    } else if (err == *best_err) {
      hi = m;
      tie = true;
    }
  }
  if (!best_err) throw budget_error("brute_force_best: empty scan window");
  if (tie) return steps::Twin<Int>{lo, hi};
  return steps::Strict<Int>{lo};
}

// Length of the continued fraction expansion of sqrt(n) until the classical
// P/Q recurrence first returns to Q = 1 (one full period for nonsquare n).
template <integer_like Int>
std::size_t cf_step_count(const Int& n) {
  if (n < Int(2) || arith::is_square(n))
    throw nonsquare_required("n must be a nonsquare positive integer");
  Int s = arith::isqrt(n);
  Int p(0), q(1);
  for (std::size_t count = 1;; ++count) {
    if (count > 10'000'000) throw budget_error("cf_step_count: period cap exceeded");
    Int digit = Int(Int(p + s) / q);
    Int p_next = Int(digit * q - p);
    Int q_next = arith::exact_div(Int(n - p_next * p_next), q);
    if (q_next == Int(1)) return count;
    p = p_next;
    q = q_next;
  }
}

namespace detail {

// (x + y sqrt(n)) * (a + b sqrt(n)) on coefficient pairs.
template <integer_like Int>
void mul_unit(const Int& n, Int& x, Int& y, const Int& a, const Int& b) {
  Int nx = Int(x * a + n * y * b);
  Int ny = Int(x * b + y * a);
  x = nx;
  y = ny;
}

template <integer_like Int>
bool unit_power_equals(const Int& n, const Int& a, const Int& b, unsigned p,
                       const Int& x, const Int& y) {
  Int rx(1), ry(0), ba(a), bb(b);
  unsigned e = p;
  while (e != 0) {
    if (e & 1u) mul_unit(n, rx, ry, ba, bb);
    e >>= 1u;
    if (e != 0) {
      Int na = ba, nb = bb;
      mul_unit(n, ba, bb, na, nb);
    }
    if (rx > x || ry > y) return false;  // coefficients only grow; overshoot is final
  }
  return rx == x && ry == y;
}

inline bool small_prime(unsigned v) {
  if (v < 2) return false;
  for (unsigned d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

}  // namespace detail

// Whether (x, y) is the y-minimal solution of x^2 - n y^2 = +-1. Positive
// solutions form the cyclic group generated by the fundamental unit, so a
// non-minimal solution is h^p for some solution h and prime p. For each prime
// p <= bitlen(2x) + 1 the trace of a candidate h lies within a few units of
// iroot(2x, p); each candidate is reconstructed and checked by exact unit
// exponentiation. A direct scan handles small y outright.
template <integer_like Int>
bool is_minimal_solution(const Int& n, const PellSolution<Int>& sol,
                         const OracleBudget& budget = {}) {
  if (n < Int(2) || arith::is_square(n))
    throw nonsquare_required("n must be a nonsquare positive integer");
  if (sol.sign != 1 && sol.sign != -1)
    throw invalid_input("is_minimal_solution: sign must be +-1");
  if (sol.x < Int(1) || sol.y < Int(1) ||
      Int(sol.x * sol.x - n * sol.y * sol.y) != Int(sol.sign))
    throw invalid_input("is_minimal_solution: not a solution of x^2 - n y^2 = +-1");
  if (sol.y <= Int(static_cast<long long>(budget.y_limit))) {
    std::optional<PellSolution<Int>> found = brute_force_pell(n, budget);
    return found && found->y == sol.y;
  }
  Int two_x = Int(Int(2) * sol.x);
  unsigned max_p = arith::bit_length(two_x) + 1;
  for (unsigned p = 2; p <= max_p; ++p) {
    if (!detail::small_prime(p)) continue;
    Int t = arith::iroot(two_x, p);
    Int c = Int(t - Int(3));
    if (c < Int(2)) c = Int(2);
    Int stop = Int(t + Int(4));
    for (; c <= stop; ++c) {
      if (Int(c % Int(2)) != Int(0)) continue;  // trace of a + b sqrt(n) is 2a
      Int a = Int(c >> 1u);
      for (int delta : {1, -1}) {
        Int num = Int(a * a - Int(delta));
        if (num < Int(0) || Int(num % n) != Int(0)) continue;
        Int b2 = Int(num / n);
        Int b = arith::isqrt(b2);
        if (b < Int(1) || b * b != b2) continue;
        int sign_p = (delta == -1 && (p & 1u)) ? -1 : 1;
        if (sign_p != sol.sign) continue;
        if (detail::unit_power_equals(n, a, b, p, sol.x, sol.y)) return false;
      }
    }
  }
  return true;
}

}  // namespace chakravala::oracle
