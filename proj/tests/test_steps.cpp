#include <catch2/catch_amalgamated.hpp>

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "chakravala/errors.hpp"
#include "chakravala/steps.hpp"

namespace steps = chakravala::steps;
using Nat = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Step = steps::Step<Nat>;
using Strict = steps::Strict<Nat>;
using Twin = steps::Twin<Nat>;
using steps::Cond;

TEST_CASE("canonical_residue", "[steps]") {
  REQUIRE(steps::canonical_residue(Nat(-5), Nat(4)) == 3);
  REQUIRE(steps::canonical_residue(Nat(0), Nat(1)) == 0);
  REQUIRE(steps::canonical_residue(Nat(-7), Nat(5)) == 3);
  REQUIRE(steps::canonical_residue(Nat(10), Nat(7)) == 3);
  REQUIRE(steps::canonical_residue(Nat(-1), Nat(1)) == 0);
  REQUIRE_THROWS_AS(steps::canonical_residue(Nat(3), Nat(0)), chakravala::invalid_modulus);
}

TEST_CASE("select_best known values", "[steps]") {
  REQUIRE(steps::select_best(Nat(29), Nat(1), Nat(0)) == steps::BestChoice<Nat>(Strict{5}));
  REQUIRE(steps::select_best(Nat(29), Nat(4), Nat(3)) == steps::BestChoice<Nat>(Twin{3, 7}));
  REQUIRE(steps::select_best(Nat(29), Nat(5), Nat(2)) == steps::BestChoice<Nat>(Strict{7}));
  // class 1 mod 3 for n = 13: |16 - 13| = 3 beats |1 - 13| = 12
  REQUIRE(steps::select_best(Nat(13), Nat(3), Nat(1)) == steps::BestChoice<Nat>(Strict{4}));
  // class 2 mod 3 for n = 13: |4 - 13| = 9 beats |25 - 13| = 12
  REQUIRE(steps::select_best(Nat(13), Nat(3), Nat(2)) == steps::BestChoice<Nat>(Strict{2}));
  REQUIRE(steps::select_best(Nat(106), Nat(10), Nat(4)) == steps::BestChoice<Nat>(Twin{4, 14}));
}

TEST_CASE("select_best input validation", "[steps]") {
  REQUIRE_THROWS_AS(steps::select_best(Nat(29), Nat(0), Nat(0)), chakravala::invalid_modulus);
  REQUIRE_THROWS_AS(steps::select_best(Nat(29), Nat(6), Nat(0)), chakravala::modulus_too_large);
  REQUIRE_THROWS_AS(steps::select_best(Nat(36), Nat(2), Nat(0)), chakravala::nonsquare_required);
  REQUIRE_THROWS_AS(steps::select_best(Nat(29), Nat(4), Nat(4)), chakravala::invalid_input);
  REQUIRE_THROWS_AS(steps::select_best(Nat(29), Nat(4), Nat(-1)), chakravala::invalid_input);
}

TEST_CASE("is_best known values", "[steps]") {
  REQUIRE(steps::is_best(Nat(29), Nat(4), Nat(3)));
  REQUIRE(steps::is_best(Nat(29), Nat(4), Nat(7)));
  REQUIRE_FALSE(steps::is_best(Nat(29), Nat(4), Nat(11)));
  REQUIRE(steps::is_best(Nat(29), Nat(1), Nat(5)));
  REQUIRE_FALSE(steps::is_best(Nat(29), Nat(1), Nat(4)));
  REQUIRE_THROWS_AS(steps::is_best(Nat(29), Nat(4), Nat(0)), chakravala::invalid_input);
}

TEST_CASE("cond2 known values", "[steps]") {
  REQUIRE(steps::cond2(Nat(29), Nat(4), Nat(5)) == Cond::holds_equal);
  REQUIRE(steps::cond2(Nat(29), Nat(1), Nat(4)) == Cond::holds_strict);
  REQUIRE(steps::cond2(Nat(29), Nat(4), Nat(6)) == Cond::fails);
}

TEST_CASE("cond3 known values", "[steps]") {
  REQUIRE(steps::cond3(Nat(29), Nat(4), Nat(5), Nat(3), -1) == Cond::holds_equal);
  REQUIRE(steps::cond3(Nat(29), Nat(1), Nat(4), Nat(5), -1) == Cond::holds_strict);
  REQUIRE(steps::cond3(Nat(29), Nat(4), Nat(5), Nat(7), +1) == Cond::holds_equal);
  REQUIRE_THROWS_AS(steps::cond3(Nat(29), Nat(4), Nat(5), Nat(3), 0), chakravala::invalid_input);
}

TEST_CASE("is_step known values", "[steps]") {
  REQUIRE(steps::is_step(Nat(29), Step{1, 5, 4, -1}));
  REQUIRE(steps::is_step(Nat(2), Step{1, 1, 1, -1}));
  REQUIRE(steps::is_step(Nat(29), Step{4, 3, 5, -1}));
  // m = 11 is not best mod 4 (m = 7 is closer to sqrt(29))
  REQUIRE_FALSE(steps::is_step(Nat(29), Step{4, 11, 23, +1}));
  // wrong eps
  REQUIRE_FALSE(steps::is_step(Nat(29), Step{1, 5, 4, +1}));
  // wrong kp
  REQUIRE_FALSE(steps::is_step(Nat(29), Step{1, 5, 3, -1}));
  // k^2 >= n
  REQUIRE_FALSE(steps::is_step(Nat(29), Step{6, 7, 2, +1}));
  REQUIRE_THROWS_AS(steps::is_step(Nat(25), Step{1, 4, 9, -1}), chakravala::nonsquare_required);
}

TEST_CASE("reverse", "[steps]") {
  Step s{1, 5, 4, -1};
  REQUIRE(steps::reverse(s) == Step{4, 5, 1, -1});
  REQUIRE(steps::reverse(steps::reverse(s)) == s);
}

TEST_CASE("is_reduced", "[steps]") {
  // kp >= k always reduced
  REQUIRE(steps::is_reduced(Nat(29), Step{1, 5, 4, -1}));
  REQUIRE(steps::is_reduced(Nat(29), Step{4, 3, 5, -1}));
  // kp < k but condition (2) still holds at modulus kp
  REQUIRE(steps::is_reduced(Nat(29), Step{5, 7, 4, +1}));
  REQUIRE(steps::is_reduced(Nat(29), Step{5, 3, 4, -1}));
  // the twin steps of n = 106 are steps but not reduced:
  // 4*10^2 + 9^2 = 481 > 4*106, and indeed 4 is not best mod 9
  REQUIRE(steps::is_step(Nat(106), Step{10, 4, 9, -1}));
  REQUIRE_FALSE(steps::is_reduced(Nat(106), Step{10, 4, 9, -1}));
  REQUIRE_FALSE(steps::is_reduced(Nat(106), Step{10, 14, 9, +1}));
  // non-steps are never reduced
  REQUIRE_FALSE(steps::is_reduced(Nat(29), Step{4, 11, 23, +1}));
}

TEST_CASE("successor known values", "[steps]") {
  auto at_fork = steps::successor(Nat(29), Step{1, 5, 4, -1});
  REQUIRE(at_fork == std::vector<Step>{{4, 3, 5, -1}, {4, 7, 5, +1}});
  auto after_minus = steps::successor(Nat(29), Step{4, 3, 5, -1});
  REQUIRE(after_minus == std::vector<Step>{{5, 7, 4, +1}});
  auto self_cycle = steps::successor(Nat(5), Step{1, 2, 1, -1});
  REQUIRE(self_cycle == std::vector<Step>{{1, 2, 1, -1}});
  // successor of a non-reduced step is still reduced
  auto from_unreduced = steps::successor(Nat(106), Step{10, 4, 9, -1});
  REQUIRE(from_unreduced == std::vector<Step>{{9, 5, 9, -1}});
  REQUIRE(steps::is_reduced(Nat(106), from_unreduced.front()));
  REQUIRE_THROWS_AS(steps::successor(Nat(29), Step{4, 11, 23, +1}), chakravala::invalid_input);
}

TEST_CASE("step algebra properties over a small range", "[steps]") {
  for (long long n = 2; n <= 150; ++n) {
    Nat big(n);
    if (chakravala::arith::is_square(big)) continue;
    Nat s = chakravala::arith::isqrt(big);
    for (Nat k(1); k * k < big; ++k) {
      for (Nat r(0); r < k; ++r) {
        if ((r * r - big) % k != 0) continue;
        steps::BestChoice<Nat> choice = steps::select_best(big, k, r);
        auto check_step = [&](const Nat& m) {
          Nat d = m * m - big;
          Step st{k, m, chakravala::arith::abs_value(d) / k, d > 0 ? 1 : -1};
          REQUIRE(steps::is_step(big, st));
          // every step keeps kp below sqrt(n)
          REQUIRE(st.kp * st.kp < big);
          // kp >= k forces reduced
          if (st.kp >= st.k) REQUIRE(steps::is_reduced(big, st));
          // reversal is a step exactly when the step is reduced
          REQUIRE(steps::is_step(big, steps::reverse(st)) == steps::is_reduced(big, st));
          // successors of any step are reduced
          for (const Step& succ : steps::successor(big, st)) {
            REQUIRE(steps::is_reduced(big, succ));
            REQUIRE(succ.k == st.kp);
          }
        };
        if (const auto* twin = std::get_if<Twin>(&choice)) {
          REQUIRE(twin->m_plus == twin->m_minus + k);
          REQUIRE(big - twin->m_minus * twin->m_minus == twin->m_plus * twin->m_plus - big);
          REQUIRE(k % 2 == 0);  // ties need even k
          check_step(twin->m_minus);
          check_step(twin->m_plus);
        } else {
          check_step(std::get<Strict>(choice).m);
        }
        (void)s;
      }
    }
  }
}

TEST_CASE("step algebra works over builtin integers", "[steps]") {
  using Step64 = steps::Step<std::int64_t>;
  REQUIRE(steps::select_best<std::int64_t>(29, 4, 3) ==
          steps::BestChoice<std::int64_t>(steps::Twin<std::int64_t>{3, 7}));
  REQUIRE(steps::is_step<std::int64_t>(29, Step64{1, 5, 4, -1}));
  REQUIRE(steps::successor<std::int64_t>(29, Step64{4, 3, 5, -1}) ==
          std::vector<Step64>{{5, 7, 4, +1}});
}
