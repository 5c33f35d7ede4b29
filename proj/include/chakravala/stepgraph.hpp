#pragma once

// Exhaustive verification sweeps. For one n the full step set is enumerated
// directly (per residue class, both straddlers of sqrt(n)); on top of that
// the sweeps machine-check, over ranges of n:
//   - verify_main_theorem:      every successor of every step is reduced, the
//                               step set is closed under successors, and
//                               reversal lands in the set exactly for reduced
//                               steps;
//   - verify_best_equivalence:  best-mod-k, condition (2) and condition (3)
//                               agree (including strictness), cross-checked
//                               against the oracle's direct scan;
//   - verify_sequence_structure: runs halt within |step set| stages, traces
//                               pass every trace invariant, twin forks are
//                               local and unique, branches mirror each other;
//   - verify_oracle_agreement:  the produced solution is the y-minimal one.
// Square n inside a range are skipped and not counted. Ranges can be swept on
// several threads; reports merge deterministically (violations sorted by n).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "chakravala/arith.hpp"
#include "chakravala/engine.hpp"
#include "chakravala/errors.hpp"
#include "chakravala/oracle.hpp"
#include "chakravala/steps.hpp"

namespace chakravala::stepgraph {

using arith::integer_like;

template <integer_like Int>
struct TwinSite {
  Int k;
  Int r;        // the residue class with the tie
  Int m_minus;  // = kp - k/2
  Int m_plus;   // = kp + k/2

  friend bool operator==(const TwinSite&, const TwinSite&) = default;
};

template <integer_like Int>
struct StepSet {
  Int n;
  std::vector<steps::Step<Int>> steps;  // sorted by (k, m)
  std::vector<TwinSite<Int>> twin_sites;

  bool contains(const steps::Step<Int>& s) const {
    auto it = std::lower_bound(steps.begin(), steps.end(), s, steps::step_less<Int>);
    return it != steps.end() && *it == s;
  }

  friend bool operator==(const StepSet&, const StepSet&) = default;
};

// All steps for n: for each modulus k with k^2 < n and each class r mod k
// with r^2 = n (mod k), the two class elements straddling sqrt(n) are the only
// best candidates; the nearer one wins, ties give both (a twin site).
template <integer_like Int>
StepSet<Int> enumerate_steps(const Int& n) {
  if (n < Int(2) || arith::is_square(n))
    throw nonsquare_required("n must be a nonsquare positive integer");
  Int s = arith::isqrt(n);
  StepSet<Int> out;
  out.n = n;
  for (Int k(1); k * k < n; ++k) {
    for (Int r(0); r < k; ++r) {
      Int m_lo = Int(s - Int(Int(s - r) % k));  // largest class element <= s
      if (m_lo < Int(1)) continue;
      Int below = Int(n - m_lo * m_lo);
      if (Int(below % k) != Int(0)) continue;  // class never divides m^2 - n
      Int m_hi = Int(m_lo + k);
      Int above = Int(m_hi * m_hi - n);
      if (below < above) {
        out.steps.push_back(steps::Step<Int>{k, m_lo, arith::exact_div(below, k), -1});
      } else if (above < below) {
        out.steps.push_back(steps::Step<Int>{k, m_hi, arith::exact_div(above, k), 1});
      } else {
        out.steps.push_back(steps::Step<Int>{k, m_lo, arith::exact_div(below, k), -1});
        out.steps.push_back(steps::Step<Int>{k, m_hi, arith::exact_div(above, k), 1});
        out.twin_sites.push_back(TwinSite<Int>{k, r, m_lo, m_hi});
      }
    }
  }
  std::sort(out.steps.begin(), out.steps.end(), steps::step_less<Int>);
  return out;
}

template <integer_like Int>
struct SweepViolation {
  Int n;
  std::string check;
  std::string detail;

  friend bool operator==(const SweepViolation&, const SweepViolation&) = default;
};

template <integer_like Int>
struct TheoremReport {
  Int n_lo{0};
  Int n_hi{0};
  std::uint64_t ns_checked = 0;
  std::uint64_t steps_checked = 0;
  std::uint64_t successors_checked = 0;
  std::uint64_t classes_checked = 0;
  std::uint64_t traces_checked = 0;
  std::uint64_t solutions_checked = 0;
  std::uint64_t twins_found = 0;
  std::vector<SweepViolation<Int>> violations;
  double elapsed_seconds = 0.0;

  bool ok() const { return violations.empty(); }

  void merge(const TheoremReport& other) {
    ns_checked += other.ns_checked;
    steps_checked += other.steps_checked;
    successors_checked += other.successors_checked;
    classes_checked += other.classes_checked;
    traces_checked += other.traces_checked;
    solutions_checked += other.solutions_checked;
    twins_found += other.twins_found;
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }
};

namespace detail {

template <integer_like Int>
void add_violation(TheoremReport<Int>& report, const Int& n, const std::string& check,
                   const std::string& detail) {
  report.violations.push_back(SweepViolation<Int>{n, check, detail});
}

template <integer_like Int>
std::string describe(const steps::Step<Int>& s) {
  return "(" + arith::to_decimal(s.k) + ", " + arith::to_decimal(s.m) + ", " +
         arith::to_decimal(s.kp) + ", " + (s.eps > 0 ? "+1" : "-1") + ")";
}

// Runs per_n(n, report) for every nonsquare n in [lo, hi], optionally on
// several threads. Exceptions escaping per_n become "exception" violations so
// a sweep always reports on the whole range.
template <integer_like Int, typename PerN>
TheoremReport<Int> sweep_range(const Int& lo, const Int& hi, unsigned jobs, PerN per_n) {
  if (lo > hi) throw invalid_input("sweep: empty range (lo > hi)");
  if (lo < Int(2)) throw invalid_input("sweep: range must start at 2 or above");
  Int span = Int(hi - lo);
  if (span > Int(static_cast<long long>(1) << 40))
    throw invalid_input("sweep: range too large");
  const std::uint64_t count = static_cast<std::uint64_t>(span) + 1;
  auto started = std::chrono::steady_clock::now();
  auto run_one = [&](const Int& n, TheoremReport<Int>& report) {
    if (arith::is_square(n)) return;
    ++report.ns_checked;
    try {
      per_n(n, report);
    } catch (const std::exception& e) {
      add_violation(report, n, "exception", e.what());
    }
  };
  TheoremReport<Int> total;
  total.n_lo = lo;
  total.n_hi = hi;
  unsigned workers = jobs != 0 ? jobs : std::max(1u, std::thread::hardware_concurrency());
  if (static_cast<std::uint64_t>(workers) > count)
    workers = static_cast<unsigned>(count);
  if (workers <= 1) {
    for (Int n = lo; n <= hi; ++n) run_one(n, total);
  } else {
    std::vector<TheoremReport<Int>> locals(workers);
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (;;) {
          std::uint64_t idx = next.fetch_add(1, std::memory_order_relaxed);
          if (idx >= count) return;
          Int n = Int(lo + Int(static_cast<long long>(idx)));
          run_one(n, locals[w]);
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const TheoremReport<Int>& local : locals) total.merge(local);
    std::stable_sort(total.violations.begin(), total.violations.end(),
                     [](const SweepViolation<Int>& a, const SweepViolation<Int>& b) {
                       return a.n < b.n;
                     });
  }
  total.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return total;
}

}  // namespace detail

// Every successor of every step (reduced or not) is reduced; successors stay
// inside the enumerated step set; reversal lands in the set exactly for
// reduced steps.
template <integer_like Int>
TheoremReport<Int> verify_main_theorem(const Int& lo, const Int& hi, unsigned jobs = 0) {
  return detail::sweep_range<Int>(lo, hi, jobs, [](const Int& n, TheoremReport<Int>& report) {
    StepSet<Int> all = enumerate_steps(n);
    report.steps_checked += all.steps.size();
    report.twins_found += all.twin_sites.size();
    for (const steps::Step<Int>& s : all.steps) {
      for (const steps::Step<Int>& succ : steps::successor(n, s)) {
        ++report.successors_checked;
        if (!steps::is_reduced(n, succ))
          detail::add_violation(report, n, "successor_reduced",
                                "successor " + detail::describe(succ) + " of " +
                                    detail::describe(s) + " is not reduced");
        if (!all.contains(succ))
          detail::add_violation(report, n, "closure",
                                "successor " + detail::describe(succ) + " of " +
                                    detail::describe(s) + " is not in the step set");
      }
      bool reversed_in_set = all.contains(steps::reverse(s));
      if (steps::is_reduced(n, s) != reversed_in_set)
        detail::add_violation(report, n, "reverse_closure",
                              "reverse of " + detail::describe(s) +
                                  " disagrees with is_reduced");
    }
  });
}

// Best-mod-k vs condition (2) vs condition (3), with matching strictness, for
// every admissible (k, m); the per-class winner is cross-checked against the
// oracle's direct scan.
template <integer_like Int>
TheoremReport<Int> verify_best_equivalence(const Int& lo, const Int& hi, unsigned jobs = 0) {
  return detail::sweep_range<Int>(lo, hi, jobs, [](const Int& n, TheoremReport<Int>& report) {
    Int s = arith::isqrt(n);
    for (Int k(1); k * k < n; ++k) {
      for (Int r(0); r < k; ++r) {
        if (Int(Int(r * r - n) % k) != Int(0)) continue;  // k never divides m^2 - n
        ++report.classes_checked;
        steps::BestChoice<Int> chosen = steps::select_best(n, k, r);
        steps::BestChoice<Int> scanned = oracle::brute_force_best(n, k, r);
        if (chosen != scanned)
          detail::add_violation(report, n, "best_scan",
                                "select_best and the direct scan disagree at k=" +
                                    arith::to_decimal(k) + " r=" + arith::to_decimal(r));
        Int first = r == Int(0) ? k : r;
        Int bound = Int(Int(2) * Int(s + Int(1)) + k);
        for (Int m = first; m <= bound; m = Int(m + k)) {
          Int d = Int(m * m - n);
          int eps = d > Int(0) ? 1 : -1;
          Int kp = arith::exact_div(arith::abs_value(d), k);
          Int e = arith::abs_value(d);
          Int up = Int(m + k);
          Int up_err = arith::abs_value(Int(up * up - n));
          bool best;
          bool strictly;
          if (m > k) {
            Int down = Int(m - k);
            Int down_err = arith::abs_value(Int(down * down - n));
            best = down_err >= e && up_err >= e;
            strictly = down_err > e && up_err > e;
          } else {
            best = up_err >= e;
            strictly = up_err > e;
          }
          steps::Cond c2 = steps::cond2(n, k, kp);
          steps::Cond c3 = steps::cond3(n, k, kp, m, eps);
          if (best != (c2 != steps::Cond::fails) || best != (c3 != steps::Cond::fails))
            detail::add_violation(report, n, "equivalence",
                                  "best-mod/cond2/cond3 disagree at k=" +
                                      arith::to_decimal(k) + " m=" + arith::to_decimal(m));
          if (strictly != (c2 == steps::Cond::holds_strict) ||
              strictly != (c3 == steps::Cond::holds_strict))
            detail::add_violation(report, n, "strictness",
                                  "strictness of best-mod/cond2/cond3 disagrees at k=" +
                                      arith::to_decimal(k) + " m=" + arith::to_decimal(m));
          if (steps::is_best(n, k, m) != best)
            detail::add_violation(report, n, "is_best_scan",
                                  "is_best disagrees with the neighbour scan at k=" +
                                      arith::to_decimal(k) + " m=" + arith::to_decimal(m));
        }
      }
    }
  });
}

// Halting within |step set| stages, full trace invariants on every branch,
// fork locality/uniqueness, and the mirror-exchange between the two branch
// displays of a forked run.
template <integer_like Int>
TheoremReport<Int> verify_sequence_structure(const Int& lo, const Int& hi, unsigned jobs = 0) {
  return detail::sweep_range<Int>(lo, hi, jobs, [](const Int& n, TheoremReport<Int>& report) {
    engine::Trace<Int> minus = engine::run(n, engine::TwinPolicy::prefer_minus);
    ++report.traces_checked;
    StepSet<Int> all = enumerate_steps(n);
    if (minus.length() > all.steps.size())
      detail::add_violation(report, n, "halting_bound",
                            "trace is longer than the whole step set");
    for (const engine::TraceIssue& issue : engine::verify_trace(n, minus).issues)
      detail::add_violation(report, n, "trace_minus:" + issue.check, issue.detail);
    if (!minus.fork) return;
    ++report.twins_found;
    engine::Trace<Int> plus = engine::run(n, engine::TwinPolicy::prefer_plus);
    ++report.traces_checked;
    for (const engine::TraceIssue& issue : engine::verify_trace(n, plus).issues)
      detail::add_violation(report, n, "trace_plus:" + issue.check, issue.detail);
    for (const std::string& text : engine::branch_agreement_issues(n, minus, plus))
      detail::add_violation(report, n, "branch_agreement", text);
    if (plus.length() == minus.length()) {
      std::size_t len = minus.length();
      for (std::size_t t = 0; t < len; ++t)
        if (plus.step_at(t) != steps::reverse(minus.step_at(len - 1 - t))) {
          detail::add_violation(report, n, "branch_mirror",
                                "plus trace is not the reversed mirror of the minus trace");
          break;
        }
    }
  });
}

// The engine's solution is the y-minimal solution of x^2 - n y^2 = +-1:
// exhaustively when y fits the scan budget, otherwise scan absence below the
// budget plus the power-descent minimality certificate.
template <integer_like Int>
TheoremReport<Int> verify_oracle_agreement(const Int& lo, const Int& hi,
                                           const oracle::OracleBudget& budget = {},
                                           unsigned jobs = 0) {
  return detail::sweep_range<Int>(lo, hi, jobs, [budget](const Int& n, TheoremReport<Int>& report) {
    engine::Trace<Int> trace = engine::run(n);
    ++report.solutions_checked;
    const PellSolution<Int>& sol = trace.solution;
    Int norm = Int(sol.x * sol.x - n * sol.y * sol.y);
    if (sol.y < Int(1) || (sol.sign != 1 && sol.sign != -1) || norm != Int(sol.sign)) {
      detail::add_violation(report, n, "solution_valid",
                            "engine result does not satisfy x^2 - n y^2 = +-1");
      return;
    }
    if (arith::gcd(sol.x, sol.y) != Int(1))
      detail::add_violation(report, n, "solution_coprime", "gcd(x, y) != 1");
    if (sol.y <= Int(static_cast<long long>(budget.y_limit))) {
      oracle::OracleBudget capped = budget;
      capped.y_limit = static_cast<unsigned long long>(sol.y);
      std::optional<PellSolution<Int>> scanned = oracle::brute_force_pell(n, capped);
      if (!scanned || !(*scanned == sol))
        detail::add_violation(report, n, "scan_mismatch",
                              "direct scan up to y does not reproduce the engine solution");
    } else {
      if (oracle::brute_force_pell(n, budget))
        detail::add_violation(report, n, "scan_found_smaller",
                              "direct scan found a solution below the engine's y");
      if (!oracle::is_minimal_solution(n, sol, budget))
        detail::add_violation(report, n, "minimality_certificate",
                              "power descent found a smaller generating solution");
    }
  });
}

}  // namespace chakravala::stepgraph
