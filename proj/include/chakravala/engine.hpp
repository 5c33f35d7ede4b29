#pragma once

// The cyclic solver for x^2 - n y^2 = +-1 built on the step algebra.
//
// State per stage i: values (a_i, b_i) with a_i^2 - n b_i^2 = (prod eps) k_i,
// starting from a_0 = 1, b_0 = 0, k_0 = 1, m_{-1} = 0. Stage i picks m_i in
// the class -m_{i-1} mod k_i, best mod k_i, and moves to
//   a_{i+1} = (a_i m_i + n b_i) / k_i
//   b_{i+1} = (a_i + m_i b_i) / k_i
//   k_{i+1} = |m_i^2 - n| / k_i
// (all divisions exact). The run halts when k_{i+1} = 1, at which point
// (a, b) solves x^2 - n y^2 = prod(eps) and gcd(a, b) = 1.
//
// Twin choices fork the run into a minus and a plus branch; the fork is local
// (both branches re-merge one stage later) and happens at most once per run.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chakravala/arith.hpp"
#include "chakravala/errors.hpp"
#include "chakravala/solution.hpp"
#include "chakravala/steps.hpp"

namespace chakravala::engine {

using arith::integer_like;

enum class TwinPolicy { prefer_minus, prefer_plus };
enum class TwinBranch { minus, plus };

struct Fork {
  std::size_t index;  // stage at which the twin choice occurred
  TwinBranch branch;  // which twin this trace took

  friend bool operator==(const Fork&, const Fork&) = default;
};

template <integer_like Int>
struct StageRecord {
  std::size_t i;
  Int k;
  Int m;
  Int k_next;
  int eps;
  Int a_next;
  Int b_next;

  friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

template <integer_like Int>
struct Trace {
  Int n;
  std::vector<StageRecord<Int>> stages;
  std::optional<Fork> fork;
  PellSolution<Int> solution;

  std::size_t length() const { return stages.size(); }

  steps::Step<Int> step_at(std::size_t t) const {
    const StageRecord<Int>& r = stages.at(t);
    return steps::Step<Int>{r.k, r.m, r.k_next, r.eps};
  }

  friend bool operator==(const Trace&, const Trace&) = default;
};

// Safety net only; actual run lengths are bounded by the finite step set.
inline constexpr std::size_t stage_cap = 10'000'000;

template <integer_like Int>
void require_valid_n(const Int& n) {
  if (n < Int(2) || arith::is_square(n))
    throw nonsquare_required("n must be a nonsquare positive integer");
}

namespace detail {

// One stage: given (a, b, k) and the previous m, pick this stage's m under
// the policy and produce the full record. Twin detection is reported through
// `fork_here`; `sibling` receives the unchosen twin value when one exists.
template <integer_like Int>
StageRecord<Int> advance(const Int& n, std::size_t i, const Int& a, const Int& b,
                         const Int& k, const Int& m_prev, TwinPolicy policy,
                         bool& fork_here, Int& sibling) {
  Int r = steps::canonical_residue(Int(-m_prev), k);
  steps::BestChoice<Int> choice = steps::select_best(n, k, r);
  Int m;
  fork_here = false;
  if (const auto* twin = std::get_if<steps::Twin<Int>>(&choice)) {
    fork_here = true;
    if (policy == TwinPolicy::prefer_minus) {
      m = twin->m_minus;
      sibling = twin->m_plus;
    } else {
      m = twin->m_plus;
      sibling = twin->m_minus;
    }
  } else {
    m = std::get<steps::Strict<Int>>(choice).m;
  }
  Int d = Int(m * m - n);
  int eps = d > Int(0) ? 1 : -1;
  Int k_next = arith::exact_div(arith::abs_value(d), k);
  Int a_next = arith::exact_div(Int(a * m + n * b), k);
  Int b_next = arith::exact_div(Int(a + m * b), k);
  return StageRecord<Int>{i, k, m, k_next, eps, a_next, b_next};
}

}  // namespace detail

template <integer_like Int>
Trace<Int> run(const Int& n, TwinPolicy policy = TwinPolicy::prefer_minus) {
  require_valid_n(n);
  Trace<Int> trace;
  trace.n = n;
  Int a(1), b(0), k(1), m_prev(0);
  int sign = 1;
  for (std::size_t i = 0;; ++i) {
    if (i >= stage_cap) throw budget_error("run: stage cap exceeded");
    bool fork_here = false;
    Int sibling(0);
    StageRecord<Int> rec =
        detail::advance(n, i, a, b, k, m_prev, policy, fork_here, sibling);
    if (fork_here) {
      if (trace.fork) throw internal_error("run: second twin fork in one run");
      trace.fork = Fork{i, policy == TwinPolicy::prefer_minus ? TwinBranch::minus
                                                              : TwinBranch::plus};
    }
    sign *= rec.eps;
    trace.stages.push_back(rec);
    if (rec.k_next == Int(1)) {
      trace.solution = PellSolution<Int>{rec.a_next, rec.b_next, sign};
      return trace;
    }
    a = rec.a_next;
    b = rec.b_next;
    k = rec.k_next;
    m_prev = rec.m;
  }
}

template <integer_like Int>
struct BranchPair {
  Trace<Int> minus;
  std::optional<Trace<Int>> plus;  // engaged iff the run forks
};

// Cross-branch consistency of two traces of the same forked run. Empty result
// means: same length, same fork index, identical k-columns, m and eps columns
// swapped exactly at the fork stage and the one after it, identical (a, b)
// records everywhere except the fork stage itself, identical solutions.
template <integer_like Int>
std::vector<std::string> branch_agreement_issues(const Int& n, const Trace<Int>& minus,
                                                 const Trace<Int>& plus) {
  std::vector<std::string> issues;
  auto note = [&](const std::string& text) { issues.push_back(text); };
  if (minus.n != n || plus.n != n) note("trace n does not match");
  if (!minus.fork || !plus.fork) {
    note("both traces must fork");
    return issues;
  }
  if (minus.fork->branch != TwinBranch::minus || plus.fork->branch != TwinBranch::plus)
    note("branch labels do not match the policies");
  if (minus.fork->index != plus.fork->index) {
    note("fork indices differ");
    return issues;
  }
  if (minus.length() != plus.length()) {
    note("trace lengths differ");
    return issues;
  }
  std::size_t j = minus.fork->index;
  std::size_t len = minus.length();
  if (j + 1 >= len) {
    note("fork stage has no successor stage");
    return issues;
  }
  for (std::size_t t = 0; t < len; ++t) {
    const StageRecord<Int>& lo = minus.stages[t];
    const StageRecord<Int>& hi = plus.stages[t];
    if (lo.k != hi.k || lo.k_next != hi.k_next)
      note("k-sequences differ at stage " + std::to_string(t));
    bool center = (t == j || t == j + 1);
    if (center) {
      const StageRecord<Int>& lo_other = minus.stages[t == j ? j + 1 : j];
      if (lo_other.m != hi.m || lo_other.eps != hi.eps)
        note("m/eps are not swapped across the fork at stage " + std::to_string(t));
      if (t == j && lo.m == hi.m)
        note("fork stage picked the same m on both branches");
    } else if (lo.m != hi.m || lo.eps != hi.eps) {
      note("m-sequences differ away from the fork at stage " + std::to_string(t));
    }
    if (t == j) {
      if (lo.a_next == hi.a_next && lo.b_next == hi.b_next)
        note("fork stage records should differ");
    } else if (lo.a_next != hi.a_next || lo.b_next != hi.b_next) {
      note("(a, b) records differ away from the fork at stage " + std::to_string(t));
    }
  }
  if (minus.solution != plus.solution) note("solutions differ");
  return issues;
}

// Runs the minus branch, and when it forks also the plus branch, enforcing the
// cross-branch invariants. Disagreement is a library defect, not bad input.
template <integer_like Int>
BranchPair<Int> run_both_branches(const Int& n) {
  BranchPair<Int> pair{run(n, TwinPolicy::prefer_minus), std::nullopt};
  if (!pair.minus.fork) return pair;
  pair.plus = run(n, TwinPolicy::prefer_plus);
  std::vector<std::string> issues = branch_agreement_issues(n, pair.minus, *pair.plus);
  if (!issues.empty())
    throw internal_error("run_both_branches: twin branch disagreement: " + issues.front());
  return pair;
}

// Same trace as run(), but once the palindrome midpoint is recognized the
// remaining (k, m) pairs are filled in by mirroring instead of fresh best-mod
// selections; only the (a, b) column still needs computing. Midpoints:
//   twin at stage j                      -> length 2j + 2
//   self-reversed step (k, m, k) at j    -> length 2j + 1
//   steps j-1, j reverses of each other  -> length 2j
// After a twin the very next step is the reversed twin step with the sibling
// m, then the mirror of everything before the fork.
template <integer_like Int>
Trace<Int> run_with_midpoint_shortcut(const Int& n,
                                      TwinPolicy policy = TwinPolicy::prefer_minus) {
  require_valid_n(n);
  Trace<Int> trace;
  trace.n = n;
  std::vector<steps::Step<Int>> plan;
  Int a(1), b(0), k(1), m_prev(0);
  int sign = 1;
  bool planned = false;
  for (std::size_t i = 0; !planned; ++i) {
    if (i >= stage_cap) throw budget_error("run_with_midpoint_shortcut: stage cap exceeded");
    bool fork_here = false;
    Int sibling(0);
    StageRecord<Int> rec =
        detail::advance(n, i, a, b, k, m_prev, policy, fork_here, sibling);
    if (fork_here) {
      if (trace.fork)
        throw internal_error("run_with_midpoint_shortcut: second twin fork in one run");
      trace.fork = Fork{i, policy == TwinPolicy::prefer_minus ? TwinBranch::minus
                                                              : TwinBranch::plus};
    }
    sign *= rec.eps;
    trace.stages.push_back(rec);
    plan.push_back(steps::Step<Int>{rec.k, rec.m, rec.k_next, rec.eps});
    if (rec.k_next == Int(1)) {
      trace.solution = PellSolution<Int>{rec.a_next, rec.b_next, sign};
      return trace;
    }
    a = rec.a_next;
    b = rec.b_next;
    if (fork_here) {
      plan.push_back(steps::Step<Int>{rec.k_next, sibling, rec.k, -rec.eps});
      for (std::size_t t = i; t-- > 0;) plan.push_back(steps::reverse(plan[t]));
      planned = true;
    } else if (rec.k_next == rec.k) {
      for (std::size_t t = i; t-- > 0;) plan.push_back(steps::reverse(plan[t]));
      planned = true;
    } else if (i >= 1 && plan[i] == steps::reverse(plan[i - 1])) {
      for (std::size_t t = i - 1; t-- > 0;) plan.push_back(steps::reverse(plan[t]));
      planned = true;
    } else {
      k = rec.k_next;
      m_prev = rec.m;
    }
  }
  for (std::size_t j = trace.stages.size(); j < plan.size(); ++j) {
    const steps::Step<Int>& st = plan[j];
    if (st.k != trace.stages.back().k_next)
      throw internal_error("run_with_midpoint_shortcut: mirrored moduli do not chain");
    if (arith::exact_div(arith::abs_value(Int(st.m * st.m - n)), st.k) != st.kp)
      throw internal_error("run_with_midpoint_shortcut: mirrored step is inconsistent");
    Int a_next = arith::exact_div(Int(a * st.m + n * b), st.k);
    Int b_next = arith::exact_div(Int(a + st.m * b), st.k);
    sign *= st.eps;
    trace.stages.push_back(StageRecord<Int>{j, st.k, st.m, st.kp, st.eps, a_next, b_next});
    a = a_next;
    b = b_next;
  }
  if (trace.stages.empty() || trace.stages.back().k_next != Int(1))
    throw internal_error("run_with_midpoint_shortcut: mirrored run did not halt at k = 1");
  trace.solution = PellSolution<Int>{a, b, sign};
  return trace;
}

struct TraceIssue {
  std::string check;                // name of the failed check
  std::optional<std::size_t> stage; // stage index when the defect is local
  std::string detail;
};

struct TraceReport {
  std::vector<TraceIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Re-derives every invariant of a finished trace from scratch: the step chain,
// best-mod choices and residue links, exactness of the (a, b) recurrence, the
// norm identity a^2 - n b^2 = (prod eps) k at every stage, coprimality, twin
// bookkeeping, the final solution, and the palindrome shape of the step list.
template <integer_like Int>
TraceReport verify_trace(const Int& n, const Trace<Int>& trace) {
  require_valid_n(n);
  TraceReport report;
  auto fail = [&](const char* check, std::optional<std::size_t> stage,
                  const std::string& detail) {
    report.issues.push_back(TraceIssue{check, stage, detail});
  };
  if (trace.n != n) fail("trace_n", std::nullopt, "trace.n does not match n");
  std::size_t len = trace.length();
  if (len == 0) {
    fail("nonempty", std::nullopt, "trace has no stages");
    return report;
  }
  Int a(1), b(0), k(1), m_prev(0);
  int sign = 1;
  std::size_t twin_stages = 0;
  for (std::size_t t = 0; t < len; ++t) {
    const StageRecord<Int>& rec = trace.stages[t];
    if (rec.i != t) fail("index", t, "stage numbering is not 0,1,2,...");
    if (rec.k != k) {
      fail("chain", t, "k does not continue the previous stage's k_next");
      return report;  // later checks would cascade off the broken chain
    }
    steps::Step<Int> st = trace.step_at(t);
    if (!steps::is_step(n, st)) fail("step", t, "(k, m, k_next, eps) is not a step");
    else if (!steps::is_reduced(n, st)) fail("reduced", t, "step is not reduced");
    if (steps::canonical_residue(Int(rec.m + m_prev), rec.k) != Int(0))
      fail("residue", t, "m is not in the class -m_prev mod k");
    bool twin_here = false;
    try {
      steps::BestChoice<Int> choice =
          steps::select_best(n, rec.k, steps::canonical_residue(Int(-m_prev), rec.k));
      if (const auto* twin = std::get_if<steps::Twin<Int>>(&choice)) {
        twin_here = true;
        ++twin_stages;
        bool fork_ok = trace.fork && trace.fork->index == t;
        if (!fork_ok) fail("twin_bookkeeping", t, "twin choice without matching fork record");
        else {
          Int expect = trace.fork->branch == TwinBranch::minus ? twin->m_minus : twin->m_plus;
          if (rec.m != expect) fail("twin_bookkeeping", t, "m does not match the fork branch");
        }
      } else if (std::get<steps::Strict<Int>>(choice).m != rec.m) {
        fail("best_choice", t, "m is not the best choice for this stage's class");
      }
    } catch (const error& e) {
      fail("best_choice", t, e.what());
    }
    if (!twin_here && trace.fork && trace.fork->index == t)
      fail("twin_bookkeeping", t, "fork recorded at a stage with a unique best m");
    Int d = Int(rec.m * rec.m - n);
    if ((d > Int(0) ? 1 : -1) != rec.eps) fail("eps", t, "eps is not sign(m^2 - n)");
    if (arith::abs_value(d) != rec.k * rec.k_next)
      fail("norm_split", t, "|m^2 - n| != k * k_next");
    try {
      if (rec.a_next != arith::exact_div(Int(a * rec.m + n * b), rec.k) ||
          rec.b_next != arith::exact_div(Int(a + rec.m * b), rec.k))
        fail("recurrence", t, "(a_next, b_next) do not satisfy the exact recurrence");
    } catch (const internal_error&) {
      fail("recurrence", t, "recurrence division is not exact");
    }
    sign *= rec.eps;
    Int norm = Int(rec.a_next * rec.a_next - n * rec.b_next * rec.b_next);
    if (norm != Int(sign) * rec.k_next)
      fail("norm", t, "a^2 - n b^2 != (prod eps) * k_next");
    if (arith::gcd(rec.a_next, rec.b_next) != Int(1))
      fail("coprime", t, "gcd(a_next, b_next) != 1");
    if (t + 1 < len && rec.k_next == Int(1))
      fail("early_halt", t, "k_next = 1 before the final stage");
    a = rec.a_next;
    b = rec.b_next;
    k = rec.k_next;
    m_prev = rec.m;
  }
  const StageRecord<Int>& last = trace.stages.back();
  if (last.k_next != Int(1)) fail("halt", len - 1, "final k_next != 1");
  PellSolution<Int> expect{last.a_next, last.b_next, sign};
  if (trace.solution != expect) fail("solution", std::nullopt, "solution does not match the final stage");
  Int norm = Int(trace.solution.x * trace.solution.x - n * trace.solution.y * trace.solution.y);
  if (trace.solution.y < Int(1) || norm != Int(trace.solution.sign))
    fail("solution", std::nullopt, "x^2 - n y^2 != sign or y < 1");
  if (trace.fork && trace.fork->index >= len)
    fail("twin_bookkeeping", std::nullopt, "fork index out of range");
  if (twin_stages > 1) fail("fork_count", std::nullopt, "more than one twin stage in a run");
  if (!trace.fork) {
    for (std::size_t t = 0; t < len; ++t)
      if (trace.step_at(len - 1 - t) != steps::reverse(trace.step_at(t))) {
        fail("palindrome", t, "step list is not palindromic");
        break;
      }
  } else if (trace.fork->index < len) {
    std::size_t j = trace.fork->index;
    if (len != 2 * j + 2) fail("fork_shape", j, "forked run length is not 2j + 2");
    else {
      for (std::size_t t = 0; t < j; ++t)
        if (trace.step_at(len - 1 - t) != steps::reverse(trace.step_at(t))) {
          fail("fork_shape", t, "outer steps are not mirrored around the twin centre");
          break;
        }
      const StageRecord<Int>& cj = trace.stages[j];
      const StageRecord<Int>& cn = trace.stages[j + 1];
      Int half = Int(cj.k >> 1u);
      bool centre_ok = Int(half << 1u) == cj.k && cn.k == cj.k_next && cn.k_next == cj.k &&
                       cn.eps == -cj.eps && cn.m + cj.m == Int(2) * cj.k_next &&
                       arith::abs_value(Int(cn.m - cj.m)) == cj.k &&
                       n == Int(cj.k_next * cj.k_next + half * half);
      if (!centre_ok)
        fail("fork_shape", j, "centre pair is not a twin pair m = k' -+ k/2 with n = k'^2 + (k/2)^2");
    }
  }
  return report;
}

}  // namespace chakravala::engine
