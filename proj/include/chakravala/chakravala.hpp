#pragma once

// Umbrella header. `Nat` is the default unbounded integer for the whole
// library; any type satisfying arith::integer_like works in its place.

#include <boost/multiprecision/cpp_int.hpp>

#include "chakravala/arith.hpp"
#include "chakravala/engine.hpp"
#include "chakravala/errors.hpp"
#include "chakravala/oracle.hpp"
#include "chakravala/solution.hpp"
#include "chakravala/stepgraph.hpp"
#include "chakravala/steps.hpp"
#include "chakravala/trace_json.hpp"

namespace chakravala {

using Nat = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;

}  // namespace chakravala
