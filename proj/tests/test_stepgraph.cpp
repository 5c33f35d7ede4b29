#include <catch2/catch_amalgamated.hpp>

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "chakravala/errors.hpp"
#include "chakravala/stepgraph.hpp"

namespace stepgraph = chakravala::stepgraph;
namespace steps = chakravala::steps;
namespace arith = chakravala::arith;
using Nat = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Step = steps::Step<Nat>;

TEST_CASE("enumerate_steps smallest cases", "[stepgraph]") {
  stepgraph::StepSet<Nat> two = stepgraph::enumerate_steps(Nat(2));
  REQUIRE(two.steps == std::vector<Step>{{1, 1, 1, -1}});
  REQUIRE(two.twin_sites.empty());

  stepgraph::StepSet<Nat> five = stepgraph::enumerate_steps(Nat(5));
  REQUIRE(five.steps == std::vector<Step>{{1, 2, 1, -1}, {2, 1, 2, -1}, {2, 3, 2, +1}});
  REQUIRE(five.twin_sites == std::vector<stepgraph::TwinSite<Nat>>{{2, 1, 1, 3}});
}

TEST_CASE("enumerate_steps n=29", "[stepgraph]") {
  stepgraph::StepSet<Nat> set = stepgraph::enumerate_steps(Nat(29));
  for (Step s : {Step{1, 5, 4, -1}, Step{4, 3, 5, -1}, Step{4, 7, 5, +1}, Step{5, 7, 4, +1},
                 Step{5, 3, 4, -1}, Step{4, 5, 1, -1}}) {
    INFO("step (" << s.k << ", " << s.m << ", " << s.kp << ")");
    REQUIRE(set.contains(s));
  }
  REQUIRE_FALSE(set.contains(Step{4, 11, 23, +1}));
  REQUIRE_FALSE(set.contains(Step{1, 5, 4, +1}));
  REQUIRE(set.twin_sites == std::vector<stepgraph::TwinSite<Nat>>{{4, 3, 3, 7}});
  REQUIRE(std::is_sorted(set.steps.begin(), set.steps.end(), steps::step_less<Nat>));
}

TEST_CASE("enumerate_steps finds non-reduced twin steps", "[stepgraph]") {
  stepgraph::StepSet<Nat> set = stepgraph::enumerate_steps(Nat(106));
  REQUIRE(set.contains(Step{10, 4, 9, -1}));
  REQUIRE(set.contains(Step{10, 14, 9, +1}));
  bool found = false;
  for (const auto& site : set.twin_sites)
    if (site.k == 10) {
      found = true;
      REQUIRE(site.m_minus == 4);
      REQUIRE(site.m_plus == 14);
    }
  REQUIRE(found);
}

TEST_CASE("enumerate_steps matches a naive triple scan", "[stepgraph]") {
  for (long long n = 2; n <= 500; ++n) {
    Nat big(n);
    if (arith::is_square(big)) continue;
    stepgraph::StepSet<Nat> set = stepgraph::enumerate_steps(big);
    std::size_t counted = 0;
    Nat s = arith::isqrt(big);
    for (Nat k(1); k * k < big; ++k) {
      for (Nat m(1); m <= s + k + 1; ++m) {
        Nat d = arith::abs_value(Nat(m * m - big));
        if (d % k != 0) continue;
        Step candidate{k, m, Nat(d / k), m * m > big ? 1 : -1};
        bool in_set = set.contains(candidate);
        REQUIRE(in_set == steps::is_step(big, candidate));
        if (in_set) ++counted;
      }
    }
    // every enumerated step has m <= s + k <= the scan bound, so none escape
    REQUIRE(counted == set.steps.size());
  }
}

TEST_CASE("twin sites satisfy the twin identity", "[stepgraph]") {
  std::size_t seen = 0;
  for (long long n = 2; n <= 500; ++n) {
    Nat big(n);
    if (arith::is_square(big)) continue;
    stepgraph::StepSet<Nat> set = stepgraph::enumerate_steps(big);
    for (const auto& site : set.twin_sites) {
      ++seen;
      REQUIRE(site.k % 2 == 0);
      Nat half = site.k / 2;
      Nat kp = site.m_minus + half;  // m- = kp - k/2
      REQUIRE(site.m_plus == kp + half);
      REQUIRE(big == kp * kp + half * half);
      REQUIRE(set.contains(Step{site.k, site.m_minus, kp, -1}));
      REQUIRE(set.contains(Step{site.k, site.m_plus, kp, +1}));
      REQUIRE(steps::canonical_residue(site.m_minus, site.k) == site.r);
    }
  }
  REQUIRE(seen > 0);
}

TEST_CASE("verify_main_theorem on single points and small ranges", "[stepgraph]") {
  stepgraph::TheoremReport<Nat> tiny = stepgraph::verify_main_theorem(Nat(2), Nat(2));
  REQUIRE(tiny.ns_checked == 1);
  REQUIRE(tiny.steps_checked == 1);
  REQUIRE(tiny.ok());

  stepgraph::TheoremReport<Nat> fork = stepgraph::verify_main_theorem(Nat(29), Nat(29));
  REQUIRE(fork.twins_found == 1);
  REQUIRE(fork.ok());

  stepgraph::TheoremReport<Nat> range = stepgraph::verify_main_theorem(Nat(2), Nat(300));
  REQUIRE(range.ns_checked == 299 - 16);  // 17 squares between 2 and 300
  REQUIRE(range.ok());
  REQUIRE(range.successors_checked >= range.steps_checked);
  REQUIRE(range.elapsed_seconds >= 0.0);
}

TEST_CASE("verify_best_equivalence small range", "[stepgraph]") {
  stepgraph::TheoremReport<Nat> report = stepgraph::verify_best_equivalence(Nat(2), Nat(150));
  REQUIRE(report.ok());
  REQUIRE(report.classes_checked > 0);
}

TEST_CASE("verify_sequence_structure small range", "[stepgraph]") {
  stepgraph::TheoremReport<Nat> report = stepgraph::verify_sequence_structure(Nat(2), Nat(300));
  REQUIRE(report.ok());
  REQUIRE(report.traces_checked >= report.ns_checked);
  stepgraph::TheoremReport<Nat> fork = stepgraph::verify_sequence_structure(Nat(29), Nat(29));
  REQUIRE(fork.twins_found == 1);
  REQUIRE(fork.traces_checked == 2);
  REQUIRE(fork.ok());
}

TEST_CASE("verify_oracle_agreement small range", "[stepgraph]") {
  stepgraph::TheoremReport<Nat> report = stepgraph::verify_oracle_agreement(Nat(2), Nat(200));
  REQUIRE(report.ok());
  REQUIRE(report.solutions_checked == report.ns_checked);
}

TEST_CASE("sweeps are deterministic across job counts", "[stepgraph]") {
  stepgraph::TheoremReport<Nat> serial = stepgraph::verify_main_theorem(Nat(2), Nat(150), 1);
  stepgraph::TheoremReport<Nat> parallel = stepgraph::verify_main_theorem(Nat(2), Nat(150), 4);
  REQUIRE(serial.ns_checked == parallel.ns_checked);
  REQUIRE(serial.steps_checked == parallel.steps_checked);
  REQUIRE(serial.successors_checked == parallel.successors_checked);
  REQUIRE(serial.twins_found == parallel.twins_found);
  REQUIRE(serial.violations == parallel.violations);
}

TEST_CASE("sweep range validation", "[stepgraph]") {
  REQUIRE_THROWS_AS(stepgraph::verify_main_theorem(Nat(10), Nat(5)), chakravala::invalid_input);
  REQUIRE_THROWS_AS(stepgraph::verify_main_theorem(Nat(0), Nat(5)), chakravala::invalid_input);
  REQUIRE_THROWS_AS(stepgraph::enumerate_steps(Nat(49)), chakravala::nonsquare_required);
}

TEST_CASE("stepgraph works over builtin integers", "[stepgraph]") {
  // all steps of 29: (1,5,4), (2,5,2), (4,5,1), twin (4,3,5)/(4,7,5), (5,7,4), (5,3,4)
  stepgraph::StepSet<std::int64_t> set = stepgraph::enumerate_steps<std::int64_t>(29);
  REQUIRE(set.steps.size() == 7);
  REQUIRE(set.contains(steps::Step<std::int64_t>{1, 5, 4, -1}));
  REQUIRE(stepgraph::verify_main_theorem<std::int64_t>(2, 80).ok());
}
