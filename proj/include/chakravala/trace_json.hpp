#pragma once

// Lossless JSON form of a trace. Unbounded integers travel as decimal strings
// so no consumer ever rounds them through a double; genuinely small fields
// (stage index, eps, fork index, sign) are JSON numbers. Field layout:
//
//   {
//     "n": "29",
//     "stages": [
//       {"i": 0, "k": "1", "m": "5", "k_next": "4", "eps": -1,
//        "a_next": "5", "b_next": "1"},
//       ...
//     ],
//     "fork": null or {"index": 1, "branch": "minus"},
//     "solution": {"x": "70", "y": "13", "sign": -1}
//   }

#include <cstddef>
#include <string>

#include "json.hpp"

#include "chakravala/arith.hpp"
#include "chakravala/engine.hpp"
#include "chakravala/errors.hpp"

namespace chakravala::trace_json {

using arith::integer_like;
using json = nlohmann::ordered_json;

template <integer_like Int>
json to_json(const engine::Trace<Int>& trace) {
  json stages = json::array();
  for (const engine::StageRecord<Int>& rec : trace.stages) {
    stages.push_back(json{{"i", rec.i},
                          {"k", arith::to_decimal(rec.k)},
                          {"m", arith::to_decimal(rec.m)},
                          {"k_next", arith::to_decimal(rec.k_next)},
                          {"eps", rec.eps},
                          {"a_next", arith::to_decimal(rec.a_next)},
                          {"b_next", arith::to_decimal(rec.b_next)}});
  }
  json fork;
  if (trace.fork) {
    fork = json{{"index", trace.fork->index},
                {"branch", trace.fork->branch == engine::TwinBranch::minus ? "minus" : "plus"}};
  } else {
    fork = nullptr;
  }
  return json{{"n", arith::to_decimal(trace.n)},
              {"stages", std::move(stages)},
              {"fork", std::move(fork)},
              {"solution", json{{"x", arith::to_decimal(trace.solution.x)},
                                {"y", arith::to_decimal(trace.solution.y)},
                                {"sign", trace.solution.sign}}}};
}

template <integer_like Int>
std::string to_json_string(const engine::Trace<Int>& trace, int indent = -1) {
  return to_json(trace).dump(indent);
}

namespace detail {

inline const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw invalid_input(std::string("trace json: missing field '") + name + "'");
  return *it;
}

template <integer_like Int>
Int big_field(const json& j, const char* name) {
  const json& f = field(j, name);
  if (!f.is_string())
    throw invalid_input(std::string("trace json: field '") + name + "' must be a decimal string");
  return arith::parse_decimal<Int>(f.template get_ref<const std::string&>());
}

inline long long int_field(const json& j, const char* name) {
  const json& f = field(j, name);
  if (!f.is_number_integer())
    throw invalid_input(std::string("trace json: field '") + name + "' must be an integer");
  return f.template get<long long>();
}

}  // namespace detail

template <integer_like Int>
engine::Trace<Int> from_json(const json& j) {
  if (!j.is_object()) throw invalid_input("trace json: top level must be an object");
  engine::Trace<Int> trace;
  trace.n = detail::big_field<Int>(j, "n");
  const json& stages = detail::field(j, "stages");
  if (!stages.is_array()) throw invalid_input("trace json: 'stages' must be an array");
  for (const json& stage : stages) {
    long long i = detail::int_field(stage, "i");
    long long eps = detail::int_field(stage, "eps");
    if (i < 0) throw invalid_input("trace json: stage index must be >= 0");
    if (eps != 1 && eps != -1) throw invalid_input("trace json: eps must be +-1");
    trace.stages.push_back(engine::StageRecord<Int>{
        static_cast<std::size_t>(i), detail::big_field<Int>(stage, "k"),
        detail::big_field<Int>(stage, "m"), detail::big_field<Int>(stage, "k_next"),
        static_cast<int>(eps), detail::big_field<Int>(stage, "a_next"),
        detail::big_field<Int>(stage, "b_next")});
  }
  const json& fork = detail::field(j, "fork");
  if (fork.is_null()) {
    trace.fork = std::nullopt;
  } else if (fork.is_object()) {
    long long index = detail::int_field(fork, "index");
    if (index < 0) throw invalid_input("trace json: fork index must be >= 0");
    const json& branch = detail::field(fork, "branch");
    if (!branch.is_string()) throw invalid_input("trace json: fork branch must be a string");
    const std::string& name = branch.template get_ref<const std::string&>();
    engine::TwinBranch which;
    if (name == "minus") which = engine::TwinBranch::minus;
    else if (name == "plus") which = engine::TwinBranch::plus;
    else throw invalid_input("trace json: fork branch must be 'minus' or 'plus'");
    trace.fork = engine::Fork{static_cast<std::size_t>(index), which};
  } else {
    throw invalid_input("trace json: 'fork' must be null or an object");
  }
  const json& solution = detail::field(j, "solution");
  if (!solution.is_object()) throw invalid_input("trace json: 'solution' must be an object");
  long long sign = detail::int_field(solution, "sign");
  if (sign != 1 && sign != -1) throw invalid_input("trace json: sign must be +-1");
  trace.solution = PellSolution<Int>{detail::big_field<Int>(solution, "x"),
                                     detail::big_field<Int>(solution, "y"),
                                     static_cast<int>(sign)};
  return trace;
}

template <integer_like Int>
engine::Trace<Int> from_json_string(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw invalid_input("trace json: malformed JSON");
  return from_json<Int>(j);
}

}  // namespace chakravala::trace_json
