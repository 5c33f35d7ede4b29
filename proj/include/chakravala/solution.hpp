#pragma once

#include "chakravala/arith.hpp"

namespace chakravala {

// A solution of x^2 - n y^2 = sign with sign in {+1, -1}.
template <arith::integer_like Int>
struct PellSolution {
  Int x;
  Int y;
  int sign;

  friend bool operator==(const PellSolution&, const PellSolution&) = default;
};

}  // namespace chakravala
