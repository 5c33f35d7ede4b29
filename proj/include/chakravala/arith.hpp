#pragma once

// Exact integer arithmetic helpers, generic over any integer-like type
// (builtin integers or multiprecision types such as boost cpp_int). No
// floating point anywhere: isqrt/iroot run integer Newton iterations started
// from a power-of-two overestimate and finish with a clamp loop, so results
// are exact floors for arbitrarily large operands.

#include <concepts>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "chakravala/errors.hpp"

namespace chakravala::arith {

template <typename I>
concept integer_like =
    std::regular<I> && std::totally_ordered<I> &&
    std::constructible_from<I, int> && std::constructible_from<I, long long> &&
    requires(I a, I b, unsigned s) {
      { a + b } -> std::convertible_to<I>;
      { a - b } -> std::convertible_to<I>;
      { a * b } -> std::convertible_to<I>;
      { a / b } -> std::convertible_to<I>;
      { a % b } -> std::convertible_to<I>;
      { -a } -> std::convertible_to<I>;
      { a << s } -> std::convertible_to<I>;
      { a >> s } -> std::convertible_to<I>;
      { ++a } -> std::same_as<I&>;
      { --a } -> std::same_as<I&>;
    };

template <integer_like I>
I abs_value(const I& v) {
  return v < I(0) ? I(-v) : v;
}

// Number of bits in v >= 0, i.e. bit_length(0) == 0 and otherwise the least b
// with v < 2^b. Uses the type's own msb() when one is found by ADL
// (multiprecision types), otherwise a shift loop.
template <integer_like I>
unsigned bit_length(I v) {
  if (v < I(0)) throw invalid_input("bit_length: negative value");
  if constexpr (requires(const I& x) { { msb(x) } -> std::convertible_to<unsigned>; }) {
    return v == I(0) ? 0u : static_cast<unsigned>(msb(v)) + 1u;
  } else {
    unsigned bits = 0;
    while (v > I(0)) {
      v = I(v >> 1u);
      ++bits;
    }
    return bits;
  }
}

// Floor of sqrt(v). Newton iteration x <- (x + v/x)/2 from an overestimate
// decreases strictly until it hits the floor; the final clamp loop makes the
// postcondition r*r <= v < (r+1)*(r+1) independent of the start value.
template <integer_like I>
I isqrt(const I& v) {
  if (v < I(0)) throw invalid_input("isqrt: negative value");
  if (v < I(2)) return v;
  I x = I(I(1) << (bit_length(v) / 2u + 1u));
  for (;;) {
    I y = I(I(x + I(v / x)) >> 1u);
    if (y >= x) break;
    x = y;
  }
  while (x * x > v) --x;
  while (I(x + I(1)) * I(x + I(1)) <= v) ++x;
  return x;
}

namespace detail {

// Bitmask of the quadratic residues mod 64; rules out ~81% of nonsquares
// before any isqrt work.
inline constexpr std::uint64_t square_mask_64 = [] {
  std::uint64_t mask = 0;
  for (unsigned i = 0; i < 64; ++i) mask |= std::uint64_t{1} << ((i * i) % 64);
  return mask;
}();

}  // namespace detail

template <integer_like I>
bool is_square(const I& v) {
  if (v < I(0)) return false;
  auto residue = static_cast<unsigned>(static_cast<std::uint64_t>(I(v % I(64))));
  if (((detail::square_mask_64 >> residue) & 1u) == 0) return false;
  I r = isqrt(v);
  return r * r == v;
}

template <integer_like I>
I pow_int(I base, unsigned exp) {
  I result(1);
  while (exp != 0) {
    if (exp & 1u) result = result * base;
    exp >>= 1u;
    if (exp != 0) base = base * base;
  }
  return result;
}

// Floor of the p-th root of v >= 0, p >= 1.
template <integer_like I>
I iroot(const I& v, unsigned p) {
  if (p == 0) throw invalid_input("iroot: order must be >= 1");
  if (v < I(0)) throw invalid_input("iroot: negative value");
  if (p == 1 || v < I(2)) return v;
  I x = I(I(1) << (bit_length(v) / p + 1u));
  const I order(static_cast<int>(p));
  for (;;) {
    I xp = pow_int(x, p - 1);
    I y = I(I(I(order - I(1)) * x + I(v / xp)) / order);
    if (y >= x) break;
    x = y;
  }
  while (pow_int(x, p) > v) --x;
  while (pow_int(I(x + I(1)), p) <= v) ++x;
  return x;
}

template <integer_like I>
I gcd(I a, I b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != I(0)) {
    I t = I(a % b);
    a = b;
    b = t;
  }
  return a;
}

// Division that is required to be exact; a remainder means a broken invariant
// upstream, not bad user input.
template <integer_like I>
I exact_div(const I& num, const I& den) {
  if (den == I(0)) throw invalid_modulus("exact_div: zero divisor");
  I q = I(num / den);
  if (q * den != num) throw internal_error("exact_div: non-exact division");
  return q;
}

template <integer_like I>
std::string to_decimal(const I& v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

// Strict base-10 parse of a nonnegative integer: digits only, at least one.
template <integer_like I>
I parse_decimal(std::string_view text) {
  if (text.empty()) throw invalid_input("parse_decimal: empty string");
  I value(0);
  for (char c : text) {
    if (c < '0' || c > '9')
      throw invalid_input("parse_decimal: not a nonnegative decimal integer: '" +
                          std::string(text) + "'");
    value = I(value * I(10) + I(c - '0'));
  }
  return value;
}

}  // namespace chakravala::arith
