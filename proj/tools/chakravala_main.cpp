// Command line front end.
//
//   chakravala solve N                  minimal solution of x^2 - N y^2 = +-1
//   chakravala trace N [--both-branches] [--shortcut] [--twin minus|plus]
//   chakravala verify LO HI --which prop2|theorem|structure|oracle|all [--jobs J]
//   chakravala compare LO HI            cycle length vs continued fraction period
//
// Global --format human|json|csv selects the output style. Results go to
// stdout, diagnostics to stderr. Exit codes: 0 success, 1 a verification
// sweep reported violations, 2 invalid input, 3 internal defect.

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chakravala/chakravala.hpp"

namespace {

using chakravala::Nat;
namespace arith = chakravala::arith;
namespace engine = chakravala::engine;
namespace oracle = chakravala::oracle;
namespace stepgraph = chakravala::stepgraph;
namespace trace_json = chakravala::trace_json;

enum class Format { human, json, csv };

Format parse_format(const std::string& name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  return Format::human;
}

Nat parse_n(const std::string& text) { return arith::parse_decimal<Nat>(text); }

// Right-aligned plain text table.
void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c)
      out << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << cells[c];
    out << '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
}

std::string csv_escape(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += "\"";
  return quoted;
}

std::vector<std::vector<std::string>> trace_rows(const engine::Trace<Nat>& trace) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& rec : trace.stages)
    rows.push_back({std::to_string(rec.i), arith::to_decimal(rec.k), arith::to_decimal(rec.m),
                    arith::to_decimal(rec.k_next), rec.eps > 0 ? "+1" : "-1",
                    arith::to_decimal(rec.a_next), arith::to_decimal(rec.b_next)});
  return rows;
}

void print_trace_human(std::ostream& out, const engine::Trace<Nat>& trace) {
  print_table(out, {"i", "k", "m", "k_next", "eps", "a_next", "b_next"}, trace_rows(trace));
  if (trace.fork)
    out << "fork: stage " << trace.fork->index << ", branch "
        << (trace.fork->branch == engine::TwinBranch::minus ? "minus" : "plus") << '\n';
  else
    out << "fork: none\n";
  out << "solution: x = " << trace.solution.x << ", y = " << trace.solution.y
      << ", sign = " << (trace.solution.sign > 0 ? "+1" : "-1") << '\n';
}

void print_trace_csv(std::ostream& out, const engine::Trace<Nat>& trace,
                     const std::optional<std::string>& branch) {
  out << (branch ? "branch,i,k,m,k_next,eps,a_next,b_next\n"
                 : "i,k,m,k_next,eps,a_next,b_next\n");
  for (const auto& row : trace_rows(trace)) {
    if (branch) out << *branch << ',';
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
}

int cmd_solve(const std::string& n_text, Format format) {
  Nat n = parse_n(n_text);
  engine::Trace<Nat> trace = engine::run(n);
  const auto& sol = trace.solution;
  switch (format) {
    case Format::human:
      std::cout << "n = " << n << "\nx = " << sol.x << "\ny = " << sol.y
                << "\nsign = " << (sol.sign > 0 ? "+1" : "-1") << '\n';
      break;
    case Format::json: {
      trace_json::json j{{"n", arith::to_decimal(n)},
                         {"x", arith::to_decimal(sol.x)},
                         {"y", arith::to_decimal(sol.y)},
                         {"sign", sol.sign}};
      std::cout << j.dump() << '\n';
      break;
    }
    case Format::csv:
      std::cout << "n,x,y,sign\n"
                << n << ',' << sol.x << ',' << sol.y << ',' << sol.sign << '\n';
      break;
  }
  return 0;
}

int cmd_trace(const std::string& n_text, bool both_branches, bool shortcut,
              const std::string& twin, Format format) {
  Nat n = parse_n(n_text);
  engine::TwinPolicy policy =
      twin == "plus" ? engine::TwinPolicy::prefer_plus : engine::TwinPolicy::prefer_minus;
  auto run_one = [&](engine::TwinPolicy p) {
    return shortcut ? engine::run_with_midpoint_shortcut(n, p) : engine::run(n, p);
  };
  if (!both_branches) {
    engine::Trace<Nat> trace = run_one(policy);
    switch (format) {
      case Format::human: print_trace_human(std::cout, trace); break;
      case Format::json: std::cout << trace_json::to_json_string(trace) << '\n'; break;
      case Format::csv: print_trace_csv(std::cout, trace, std::nullopt); break;
    }
    return 0;
  }
  engine::Trace<Nat> minus = run_one(engine::TwinPolicy::prefer_minus);
  std::optional<engine::Trace<Nat>> plus;
  if (minus.fork) {
    plus = run_one(engine::TwinPolicy::prefer_plus);
    auto issues = engine::branch_agreement_issues(n, minus, *plus);
    if (!issues.empty())
      throw chakravala::internal_error("twin branch disagreement: " + issues.front());
  }
  switch (format) {
    case Format::human:
      if (!plus) {
        std::cout << "no fork: the run has a single branch\n";
        print_trace_human(std::cout, minus);
      } else {
        std::cout << "branch minus:\n";
        print_trace_human(std::cout, minus);
        std::cout << "\nbranch plus:\n";
        print_trace_human(std::cout, *plus);
        std::cout << "\nbranches agree: identical k-sequence and solution\n";
      }
      break;
    case Format::json: {
      trace_json::json j = trace_json::json::array();
      j.push_back(trace_json::to_json(minus));
      if (plus) j.push_back(trace_json::to_json(*plus));
      std::cout << j.dump() << '\n';
      break;
    }
    case Format::csv:
      print_trace_csv(std::cout, minus, std::string("minus"));
      if (plus) {
        for (const auto& row : trace_rows(*plus)) {
          std::cout << "plus";
          for (const auto& cell : row) std::cout << ',' << cell;
          std::cout << '\n';
        }
      }
      break;
  }
  return 0;
}

struct NamedReport {
  std::string which;
  stepgraph::TheoremReport<Nat> report;
};

void print_report_human(std::ostream& out, const NamedReport& named) {
  const auto& r = named.report;
  out << "verify " << named.which << " [" << r.n_lo << ", " << r.n_hi << "]\n";
  out << "  ns checked:         " << r.ns_checked << '\n';
  if (r.steps_checked) out << "  steps checked:      " << r.steps_checked << '\n';
  if (r.successors_checked) out << "  successors checked: " << r.successors_checked << '\n';
  if (r.classes_checked) out << "  classes checked:    " << r.classes_checked << '\n';
  if (r.traces_checked) out << "  traces checked:     " << r.traces_checked << '\n';
  if (r.solutions_checked) out << "  solutions checked:  " << r.solutions_checked << '\n';
  out << "  twins found:        " << r.twins_found << '\n';
  out << "  violations:         " << r.violations.size() << '\n';
  out << "  elapsed:            " << std::fixed << std::setprecision(3) << r.elapsed_seconds
      << " s\n";
  for (const auto& v : r.violations)
    out << "  VIOLATION n=" << v.n << " [" << v.check << "] " << v.detail << '\n';
  out << "  result:             " << (r.ok() ? "OK" : "FAIL") << '\n';
}

trace_json::json report_to_json(const NamedReport& named) {
  const auto& r = named.report;
  trace_json::json violations = trace_json::json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"n", arith::to_decimal(v.n)}, {"check", v.check}, {"detail", v.detail}});
  return trace_json::json{{"which", named.which},
                          {"n_lo", arith::to_decimal(r.n_lo)},
                          {"n_hi", arith::to_decimal(r.n_hi)},
                          {"ns_checked", r.ns_checked},
                          {"steps_checked", r.steps_checked},
                          {"successors_checked", r.successors_checked},
                          {"classes_checked", r.classes_checked},
                          {"traces_checked", r.traces_checked},
                          {"solutions_checked", r.solutions_checked},
                          {"twins_found", r.twins_found},
                          {"violations", std::move(violations)},
                          {"elapsed_seconds", r.elapsed_seconds},
                          {"ok", r.ok()}};
}

int cmd_verify(const std::string& lo_text, const std::string& hi_text, const std::string& which,
               unsigned jobs, Format format) {
  Nat lo = parse_n(lo_text);
  Nat hi = parse_n(hi_text);
  std::vector<std::string> kinds;
  if (which == "all") kinds = {"prop2", "theorem", "structure", "oracle"};
  else kinds = {which};
  std::vector<NamedReport> reports;
  for (const std::string& kind : kinds) {
    if (kind == "prop2")
      reports.push_back({kind, stepgraph::verify_best_equivalence(lo, hi, jobs)});
    else if (kind == "theorem")
      reports.push_back({kind, stepgraph::verify_main_theorem(lo, hi, jobs)});
    else if (kind == "structure")
      reports.push_back({kind, stepgraph::verify_sequence_structure(lo, hi, jobs)});
    else
      reports.push_back({kind, stepgraph::verify_oracle_agreement(lo, hi, {}, jobs)});
  }
  bool all_ok = true;
  for (const auto& named : reports) all_ok = all_ok && named.report.ok();
  switch (format) {
    case Format::human:
      for (std::size_t i = 0; i < reports.size(); ++i) {
        if (i) std::cout << '\n';
        print_report_human(std::cout, reports[i]);
      }
      break;
    case Format::json: {
      if (reports.size() == 1) {
        std::cout << report_to_json(reports.front()).dump() << '\n';
      } else {
        trace_json::json j = trace_json::json::array();
        for (const auto& named : reports) j.push_back(report_to_json(named));
        std::cout << j.dump() << '\n';
      }
      break;
    }
    case Format::csv:
      std::cout << "which,n,check,detail\n";
      for (const auto& named : reports)
        for (const auto& v : named.report.violations)
          std::cout << named.which << ',' << v.n << ',' << csv_escape(v.check) << ','
                    << csv_escape(v.detail) << '\n';
      for (const auto& named : reports)
        std::cerr << "verify " << named.which << ": " << named.report.ns_checked
                  << " ns checked, " << named.report.violations.size() << " violations\n";
      break;
  }
  return all_ok ? 0 : 1;
}

int cmd_compare(const std::string& lo_text, const std::string& hi_text, Format format) {
  Nat lo = parse_n(lo_text);
  Nat hi = parse_n(hi_text);
  if (lo > hi) throw chakravala::invalid_input("compare: empty range (lo > hi)");
  if (lo < 2) throw chakravala::invalid_input("compare: range must start at 2 or above");
  std::vector<std::vector<std::string>> rows;
  for (Nat n = lo; n <= hi; ++n) {
    if (arith::is_square(n)) continue;
    engine::Trace<Nat> trace = engine::run(n);
    std::size_t cf = oracle::cf_step_count(n);
    rows.push_back({arith::to_decimal(n), std::to_string(trace.length()), std::to_string(cf),
                    std::to_string(arith::to_decimal(trace.solution.x).size())});
  }
  switch (format) {
    case Format::human:
      print_table(std::cout, {"n", "chakravala_steps", "cf_steps", "x_digits"}, rows);
      break;
    case Format::json: {
      trace_json::json j = trace_json::json::array();
      for (const auto& row : rows)
        j.push_back({{"n", row[0]},
                     {"chakravala_steps", std::stoull(row[1])},
                     {"cf_steps", std::stoull(row[2])},
                     {"x_digits", std::stoull(row[3])}});
      std::cout << j.dump() << '\n';
      break;
    }
    case Format::csv:
      std::cout << "n,chakravala_steps,cf_steps,x_digits\n";
      for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) std::cout << (c ? "," : "") << row[c];
        std::cout << '\n';
      }
      break;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyclic solver for the Pell equation x^2 - n y^2 = +-1"};
  app.require_subcommand(1);
  std::string format_name = "human";
  app.add_option("--format", format_name, "output format")
      ->check(CLI::IsMember({"human", "json", "csv"}));

  auto* solve = app.add_subcommand("solve", "minimal solution for n");
  solve->fallthrough();
  std::string solve_n;
  solve->add_option("N", solve_n, "nonsquare integer >= 2")->required();

  auto* trace = app.add_subcommand("trace", "full stage-by-stage run for n");
  trace->fallthrough();
  std::string trace_n;
  bool both_branches = false;
  bool shortcut = false;
  std::string twin = "minus";
  trace->add_option("N", trace_n, "nonsquare integer >= 2")->required();
  auto* both_flag = trace->add_flag("--both-branches", both_branches,
                                    "on a twin fork, show the minus and plus branches");
  trace->add_flag("--shortcut", shortcut, "fill the second half by the palindrome mirror");
  trace->add_option("--twin", twin, "branch to take at a twin fork")
      ->check(CLI::IsMember({"minus", "plus"}))
      ->excludes(both_flag);

  auto* verify = app.add_subcommand("verify", "exhaustive checks over a range of n");
  verify->fallthrough();
  std::string verify_lo, verify_hi, which;
  unsigned jobs = 0;
  verify->add_option("LO", verify_lo, "first n")->required();
  verify->add_option("HI", verify_hi, "last n")->required();
  verify->add_option("--which", which, "what to verify")
      ->required()
      ->check(CLI::IsMember({"prop2", "theorem", "structure", "oracle", "all"}));
  verify->add_option("--jobs", jobs, "worker threads (0 = all cores)");

  auto* compare = app.add_subcommand("compare", "cycle length vs continued fraction period");
  compare->fallthrough();
  std::string compare_lo, compare_hi;
  compare->add_option("LO", compare_lo, "first n")->required();
  compare->add_option("HI", compare_hi, "last n")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Format format = parse_format(format_name);
    if (solve->parsed()) return cmd_solve(solve_n, format);
    if (trace->parsed()) return cmd_trace(trace_n, both_branches, shortcut, twin, format);
    if (verify->parsed()) return cmd_verify(verify_lo, verify_hi, which, jobs, format);
    return cmd_compare(compare_lo, compare_hi, format);
  } catch (const chakravala::invalid_input& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const chakravala::internal_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const chakravala::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
