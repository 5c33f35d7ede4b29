#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include "chakravala/engine.hpp"
#include "chakravala/errors.hpp"
#include "chakravala/trace_json.hpp"

namespace engine = chakravala::engine;
namespace trace_json = chakravala::trace_json;
using Nat = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using trace_json::json;

TEST_CASE("trace json layout for n=29", "[trace_json]") {
  engine::Trace<Nat> t = engine::run(Nat(29));
  json j = trace_json::to_json(t);
  REQUIRE(j["n"] == "29");
  REQUIRE(j["stages"].is_array());
  REQUIRE(j["stages"].size() == 4);
  const json& stage0 = j["stages"][0];
  REQUIRE(stage0["i"] == 0);
  REQUIRE(stage0["k"] == "1");
  REQUIRE(stage0["m"] == "5");
  REQUIRE(stage0["k_next"] == "4");
  REQUIRE(stage0["eps"] == -1);
  REQUIRE(stage0["a_next"] == "5");
  REQUIRE(stage0["b_next"] == "1");
  REQUIRE(stage0["k"].is_string());   // big values travel as decimal strings
  REQUIRE(stage0["eps"].is_number()); // small values stay numbers
  REQUIRE(j["fork"]["index"] == 1);
  REQUIRE(j["fork"]["branch"] == "minus");
  REQUIRE(j["solution"]["x"] == "70");
  REQUIRE(j["solution"]["y"] == "13");
  REQUIRE(j["solution"]["sign"] == -1);
}

TEST_CASE("fork is null for unforked runs", "[trace_json]") {
  json j = trace_json::to_json(engine::run(Nat(13)));
  REQUIRE(j["fork"].is_null());
}

TEST_CASE("round trip preserves every field", "[trace_json]") {
  for (long long n : {2LL, 13LL, 29LL, 61LL, 106LL, 421LL}) {
    engine::Trace<Nat> t = engine::run(Nat(n));
    REQUIRE(trace_json::from_json<Nat>(trace_json::to_json(t)) == t);
    REQUIRE(trace_json::from_json_string<Nat>(trace_json::to_json_string(t)) == t);
    engine::Trace<Nat> p = engine::run(Nat(n), engine::TwinPolicy::prefer_plus);
    REQUIRE(trace_json::from_json_string<Nat>(trace_json::to_json_string(p, 2)) == p);
  }
}

TEST_CASE("from_json validates structure", "[trace_json]") {
  engine::Trace<Nat> t = engine::run(Nat(29));
  json good = trace_json::to_json(t);

  json missing = good;
  missing.erase("solution");
  REQUIRE_THROWS_AS(trace_json::from_json<Nat>(missing), chakravala::invalid_input);

  json bad_eps = good;
  bad_eps["stages"][0]["eps"] = 2;
  REQUIRE_THROWS_AS(trace_json::from_json<Nat>(bad_eps), chakravala::invalid_input);

  json bad_branch = good;
  bad_branch["fork"]["branch"] = "left";
  REQUIRE_THROWS_AS(trace_json::from_json<Nat>(bad_branch), chakravala::invalid_input);

  json numeric_n = good;
  numeric_n["n"] = 29;
  REQUIRE_THROWS_AS(trace_json::from_json<Nat>(numeric_n), chakravala::invalid_input);

  json bad_big = good;
  bad_big["solution"]["x"] = "12x4";
  REQUIRE_THROWS_AS(trace_json::from_json<Nat>(bad_big), chakravala::invalid_input);

  REQUIRE_THROWS_AS(trace_json::from_json_string<Nat>("{not json"), chakravala::invalid_input);
  REQUIRE_THROWS_AS(trace_json::from_json_string<Nat>("[1,2,3]"), chakravala::invalid_input);
}
