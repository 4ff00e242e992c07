// drfeas: solve problem files, compare DR with alternating projections, and
// run the bundled experiments and property suites.
//
// Exit codes for solve: 0 Solved, 2 Diverging, 3 CycleDetected,
// 4 MaxIterations, 5 DegenerateProjection, 1 input error.
// compare, repro and verify: 0 on success, 1 on input error, 6 on failure.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "drfeas/format.hpp"
#include "drfeas/problem.hpp"
#include "drfeas/repro.hpp"
#include "drfeas/trace_io.hpp"
#include "drfeas/verifier.hpp"

namespace {

using namespace drfeas;

constexpr int kInputError = 1;
constexpr int kCheckFailed = 6;

struct SolverFlags {
  std::optional<std::size_t> max_iter;
  std::optional<double> tol;
  std::optional<double> cycle_tol;
  std::optional<std::size_t> window;
  std::optional<std::string> tie_rule;
  std::optional<std::string> reflect_order;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App& app) {
    app.add_option("--max-iter", max_iter, "Iteration budget")->check(CLI::PositiveNumber);
    app.add_option("--tol", tol, "Membership tolerance")->check(CLI::PositiveNumber);
    app.add_option("--cycle-tol", cycle_tol, "Cycle quantization grid")->check(CLI::PositiveNumber);
    app.add_option("--window", window, "Divergence certificate window")->check(CLI::Range(2, 1 << 30));
    app.add_option("--tie-rule", tie_rule, "Tie selection")->check(CLI::IsMember({"first", "rotate", "random"}));
    app.add_option("--reflect-order", reflect_order, "DR composition order")
        ->check(CLI::IsMember({"set-first", "constraint-first"}));
    app.add_option("--seed", seed, "Seed for the random tie rule");
  }

  /// Command-line flags override the problem file.
  void apply(SolverConfig& cfg) const {
    if (max_iter) cfg.max_iter = *max_iter;
    if (tol) cfg.membership_tol = *tol;
    if (cycle_tol) cfg.cycle_tol = *cycle_tol;
    if (window) cfg.divergence_window = *window;
    if (tie_rule) cfg.tie_rule = parse_tie_rule(*tie_rule);
    if (reflect_order) cfg.reflect_order = parse_reflect_order(*reflect_order);
    if (seed) cfg.seed = *seed;
    cfg.validate();
  }
};

cli::Problem load(const std::string& path, const SolverFlags& flags) {
  cli::Problem p = cli::build_problem(cli::load_problem(path));
  flags.apply(p.config);
  return p;
}

RunResult solve_dr(const cli::Problem& p) {
  if (const HalfSpaced* h = p.halfspace()) return run_dr(*p.set, *h, p.x0, p.config);
  return run_dr_generic(*p.constraint, *p.set, p.x0, p.config);
}

RunResult solve_ap(const cli::Problem& p) {
  if (const HalfSpaced* h = p.halfspace()) return run_ap(*p.set, *h, p.x0, p.config);
  return run_ap(*p.set, *p.constraint, p.x0, p.config);
}

int exit_code(const RunOutcome& o) {
  switch (o.index()) {
    case 0: return 0;
    case 1: return 2;
    case 2: return 3;
    case 3: return 4;
    default: return 5;
  }
}

/// Writes to `path`, or to stdout for "-".
bool write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "drfeas: cannot write " << path << "\n";
    return false;
  }
  out << content;
  return static_cast<bool>(out);
}

int cmd_solve(const std::string& path, const SolverFlags& flags, const std::string& format,
              const std::string& output) {
  cli::Problem p = load(path, flags);
  RunResult r = solve_dr(p);
  std::cout << describe(r.outcome) << "\n";
  if (const auto* d = std::get_if<outcome::Diverging>(&r.outcome))
    std::cout << "certificate increment " << format_real(d->certificate.increment) << " from index "
              << d->certificate.start_index << ", q=" << format_point(d->certificate.q_fixed) << "\n";
  if (!output.empty()) {
    std::string body;
    if (format == "json") {
      body = io::to_json(r).dump(2) + "\n";
    } else {
      std::ostringstream csv;
      io::write_trace_csv(csv, r.trace);
      body = csv.str();
    }
    if (!write_output(output, body)) return kInputError;
  }
  return exit_code(r.outcome);
}

double final_distance(const RunResult& r, bool of_q) {
  if (r.trace.records.empty()) return 0.0;
  const auto& last = r.trace.records.back();
  return of_q ? last.d_qH : last.d_xH;
}

std::string cell(const RunResult& r) {
  std::string s = outcome_name(r.outcome);
  if (const auto* c = std::get_if<outcome::Cycle>(&r.outcome)) s += "(" + std::to_string(c->period) + ")";
  return s;
}

int cmd_compare(const std::string& path, const SolverFlags& flags, const std::string& format,
                const std::string& output) {
  cli::Problem p = load(path, flags);
  const RunResult dr = solve_dr(p);
  const RunResult ap = solve_ap(p);
  const auto iterations = [](const RunResult& r) { return r.trace.records.empty() ? 0 : r.trace.size() - 1; };

  std::ostringstream table;
  table << std::left << std::setw(8) << "method" << std::setw(22) << "outcome" << std::setw(12) << "iterations"
        << std::setw(24) << "final d(x,C)" << "final d(q,C)\n";
  for (const auto& [name, r] : {std::pair<const char*, const RunResult&>{"dr", dr}, {"ap", ap}}) {
    table << std::setw(8) << name << std::setw(22) << cell(r) << std::setw(12) << iterations(r) << std::setw(24)
          << format_real(final_distance(r, false)) << format_real(final_distance(r, true)) << "\n";
  }
  std::cout << table.str();
  if (!output.empty()) {
    nlohmann::json j = {{"dr", io::to_json(dr)}, {"ap", io::to_json(ap)}};
    if (format == "csv") {
      std::cerr << "drfeas: compare writes JSON; use --format json\n";
      return kInputError;
    }
    if (!write_output(output, j.dump(2) + "\n")) return kInputError;
  }
  return 0;
}

int cmd_repro(const std::string& name, bool list, const std::string& output, bool with_traces) {
  if (list) {
    for (const auto& e : repro::experiments()) std::cout << e.name << "  " << e.summary << "\n";
    return 0;
  }
  std::vector<const repro::Experiment*> chosen;
  if (name == "all") {
    for (const auto& e : repro::experiments()) chosen.push_back(&e);
  } else {
    try {
      chosen.push_back(&repro::find_experiment(name));
    } catch (const InvalidArgument& e) {
      std::cerr << "drfeas: " << e.what() << "\n";
      return kInputError;
    }
  }
  bool all_passed = true;
  nlohmann::json results = nlohmann::json::array();
  for (const auto* e : chosen) {
    const repro::ExperimentResult r = e->run();
    all_passed = all_passed && r.passed();
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << "\n";
    for (const auto& c : r.checks) {
      std::cout << "  [" << (c.passed ? "ok" : (c.fatal ? "FAILED" : "soft-miss")) << "] " << c.name;
      if (!c.detail.empty()) std::cout << ": " << c.detail;
      std::cout << "\n";
    }
    results.push_back(io::to_json(r, with_traces));
  }
  if (!output.empty() && !write_output(output, results.dump(2) + "\n")) return kInputError;
  return all_passed ? 0 : kCheckFailed;
}

struct DimRange {
  int lo = 1;
  int hi = 5;
};

DimRange parse_dims(const std::string& s) {
  DimRange d;
  const auto dash = s.find('-');
  try {
    std::size_t used = 0;
    if (dash == std::string::npos) {
      d.lo = d.hi = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
    } else {
      d.lo = std::stoi(s.substr(0, dash), &used);
      if (used != dash) throw std::invalid_argument(s);
      const std::string rest = s.substr(dash + 1);
      d.hi = std::stoi(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(s);
    }
  } catch (const std::logic_error&) {
    throw InvalidArgument("--dims expects N or LO-HI, got '" + s + "'");
  }
  if (d.lo < 1 || d.hi < d.lo) throw InvalidArgument("--dims range '" + s + "' is empty or below 1");
  return d;
}

int cmd_verify(const std::string& suite, bool list, std::size_t trials, const std::string& dims,
               std::uint64_t seed, bool mutant, const std::string& output) {
  if (list) {
    for (const auto& s : verify::suites()) std::cout << s.id << "  (mutant: " << s.mutant_name << ")\n";
    return 0;
  }
  std::vector<const verify::Suite*> chosen;
  if (suite == "all") {
    for (const auto& s : verify::suites()) chosen.push_back(&s);
  } else {
    try {
      chosen.push_back(&verify::find_suite(suite));
    } catch (const InvalidArgument& e) {
      std::cerr << "drfeas: " << e.what() << "\n";
      return kInputError;
    }
  }
  const DimRange range = parse_dims(dims);
  verify::SuiteOptions opts;
  opts.trials = trials;
  opts.min_dim = range.lo;
  opts.max_dim = range.hi;
  opts.seed = seed;

  bool ok = true;
  nlohmann::json reports = nlohmann::json::array();
  for (const auto* s : chosen) {
    const verify::PropertyReport r = s->run(opts, mutant ? s->mutant : verify::reference_step());
    // Against a mutant, success means the suite caught it.
    const bool good = mutant ? r.failure_count > 0 : r.passed();
    ok = ok && good;
    std::cerr << (good ? "PASS " : "FAIL ") << r.id << (mutant ? " vs " + s->mutant_name : std::string()) << ": "
              << r.failure_count << " failures, " << r.non_vacuous << "/" << r.trials << " non-vacuous, "
              << r.inconclusive << " inconclusive\n";
    reports.push_back(io::to_json(r));
  }
  if (!write_output(output.empty() ? "-" : output, reports.dump(2) + "\n")) return kInputError;
  return ok ? 0 : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Douglas-Rachford feasibility solver for a half-space (or convex set) and a closed set"};
  app.require_subcommand(1);

  SolverFlags flags;
  std::string problem_path;
  std::string format = "csv";
  std::string output;

  auto* solve = app.add_subcommand("solve", "Run Douglas-Rachford on a problem file");
  solve->add_option("problem", problem_path, "Problem file (JSON)")->required();
  flags.add_to(*solve);
  solve->add_option("--format", format, "Trace format")->check(CLI::IsMember({"csv", "json"}));
  solve->add_option("--output", output, "Trace destination; '-' for stdout");

  auto* compare = app.add_subcommand("compare", "Run Douglas-Rachford and alternating projections side by side");
  compare->add_option("problem", problem_path, "Problem file (JSON)")->required();
  flags.add_to(*compare);
  compare->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  compare->add_option("--output", output, "JSON with both runs; '-' for stdout");

  std::string experiment = "all";
  bool list = false;
  bool with_traces = false;
  auto* repro_cmd = app.add_subcommand("repro", "Run a bundled experiment, or all of them");
  repro_cmd->add_option("name", experiment, "Experiment name or 'all'");
  repro_cmd->add_flag("--list", list, "List experiments");
  repro_cmd->add_option("--output", output, "JSON results; '-' for stdout");
  repro_cmd->add_flag("--traces", with_traces, "Include traces in the JSON results");

  std::string suite = "all";
  std::size_t trials = 10000;
  std::string dims = "1-5";
  std::uint64_t seed = 42;
  bool mutant = false;
  auto* verify_cmd = app.add_subcommand("verify", "Run the randomized property suites");
  verify_cmd->add_option("--suite", suite, "Suite id or 'all'");
  verify_cmd->add_option("--trials", trials, "Trials per suite")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--dims", dims, "Dimension N or range LO-HI");
  verify_cmd->add_option("--seed", seed, "Master seed");
  verify_cmd->add_flag("--mutant", mutant, "Run each suite against its seeded mutant; passes when detected");
  verify_cmd->add_flag("--list", list, "List suites");
  verify_cmd->add_option("--output", output, "Reports destination (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kInputError;
  }

  try {
    if (*solve) return cmd_solve(problem_path, flags, format, output);
    if (*compare) return cmd_compare(problem_path, flags, format, output);
    if (*repro_cmd) return cmd_repro(experiment, list, output, with_traces);
    if (*verify_cmd) return cmd_verify(suite, list, trials, dims, seed, mutant, output);
  } catch (const drfeas::DegenerateProjection& e) {
    std::cerr << "drfeas: " << e.what() << "\n";
    return 5;
  } catch (const drfeas::Error& e) {
    std::cerr << "drfeas: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
