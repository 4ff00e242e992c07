#include "drfeas/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>

#include "drfeas/format.hpp"

namespace drfeas {

void SolverConfig::validate() const {
  if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  if (!(membership_tol > 0.0)) throw InvalidArgument("membership tolerance must be positive");
  if (!(cycle_tol > 0.0)) throw InvalidArgument("cycle tolerance must be positive");
  if (divergence_window < 1) throw InvalidArgument("divergence window must be >= 1");
  if (!(norm_limit > 0.0)) throw InvalidArgument("norm limit must be positive");
}

std::string to_string(TieRule rule) {
  switch (rule) {
    case TieRule::first: return "first";
    case TieRule::rotate: return "rotate";
    case TieRule::random: return "random";
  }
  return "first";
}

std::string to_string(ReflectOrder order) {
  return order == ReflectOrder::set_first ? "set-first" : "constraint-first";
}

TieRule parse_tie_rule(const std::string& s) {
  if (s == "first") return TieRule::first;
  if (s == "rotate") return TieRule::rotate;
  if (s == "random") return TieRule::random;
  throw InvalidArgument("unknown tie rule '" + s + "'");
}

ReflectOrder parse_reflect_order(const std::string& s) {
  if (s == "set-first") return ReflectOrder::set_first;
  if (s == "constraint-first") return ReflectOrder::constraint_first;
  throw InvalidArgument("unknown reflect order '" + s + "'");
}

std::string outcome_name(const RunOutcome& o) {
  struct Visitor {
    std::string operator()(const outcome::Solved&) const { return "Solved"; }
    std::string operator()(const outcome::Diverging&) const { return "Diverging"; }
    std::string operator()(const outcome::Cycle&) const { return "CycleDetected"; }
    std::string operator()(const outcome::MaxIterations&) const { return "MaxIterations"; }
    std::string operator()(const outcome::DegenerateProjection&) const { return "DegenerateProjection"; }
  };
  return std::visit(Visitor{}, o);
}

std::string describe(const RunOutcome& o) {
  struct Visitor {
    std::string operator()(const outcome::Solved& s) const {
      return "Solved q*=" + format_point(s.solution) + " in " + std::to_string(s.iterations) + " iters";
    }
    std::string operator()(const outcome::Diverging& d) const {
      return "Diverging q=" + format_point(d.certificate.q_fixed) +
             " increment=" + format_real(d.certificate.increment) +
             " from k=" + std::to_string(d.certificate.start_index) +
             " beta~" + format_real(d.beta_estimate);
    }
    std::string operator()(const outcome::Cycle& c) const {
      return "CycleDetected period=" + std::to_string(c.period) +
             " first_index=" + std::to_string(c.first_index);
    }
    std::string operator()(const outcome::MaxIterations& m) const {
      return std::string("MaxIterations") + (m.norm_limit_hit ? " (norm limit)" : "") +
             " d_qH=" + format_real(m.final_d_qH) + " beta~" + format_real(m.beta_estimate);
    }
    std::string operator()(const outcome::DegenerateProjection& d) const {
      return "DegenerateProjection at k=" + std::to_string(d.index) + ": " + d.message;
    }
  };
  return std::visit(Visitor{}, o);
}

std::size_t TieSelector::pick(std::size_t ties, std::size_t k) {
  if (ties <= 1) return 0;
  switch (rule_) {
    case TieRule::first: return 0;
    case TieRule::rotate: return k % ties;
    case TieRule::random: return std::uniform_int_distribution<std::size_t>(0, ties - 1)(rng_);
  }
  return 0;
}

GenericStep dr_step_generic(const Vector& x, const ReflectableConstraint& a, const ProjectableSet& b,
                            const SolverConfig& cfg, TieSelector& ties, std::size_t k) {
  check_dimension(a.dim(), x.size());
  check_dimension(b.dim(), x.size());
  if (cfg.reflect_order == ReflectOrder::set_first) {
    Vector q = ties.select(b.project_all(x), k);
    Vector next = a.reflect_average(x, q, cfg.membership_tol);
    return {std::move(next), std::move(q)};
  }
  const Vector p = a.project(x);
  Vector q = ties.select(b.project_all(2.0 * p - x), k);
  Vector next = x + q - p;
  return {std::move(next), std::move(q)};
}

GenericStep dr_step_generic(const Vector& x, const ReflectableConstraint& a, const ProjectableSet& b,
                            const SolverConfig& cfg) {
  TieSelector ties(cfg);
  return dr_step_generic(x, a, b, cfg, ties, 0);
}

// --- cycle detection -------------------------------------------------------

std::size_t CycleDetector::KeyHash::operator()(const std::vector<double>& key) const {
  std::uint64_t h = 1469598103934665603ull;
  for (double v : key) {
    h ^= std::bit_cast<std::uint64_t>(v);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

std::optional<CycleInfo> CycleDetector::push(const Vector& x) {
  std::vector<double> key(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    // +0.0 folds the sign of a quantized zero.
    key[static_cast<std::size_t>(i)] = std::nearbyint(x[i] / tol_) + 0.0;
  }
  const std::size_t index = count_++;
  auto [it, inserted] = seen_.try_emplace(std::move(key), index);
  if (inserted) return std::nullopt;
  return CycleInfo{index - it->second, it->second};
}

std::optional<CycleInfo> detect_cycle(const std::vector<Vector>& points, double cycle_tol) {
  CycleDetector detector(cycle_tol);
  for (const auto& p : points)
    if (auto c = detector.push(p)) return c;
  return std::nullopt;
}

std::optional<CycleInfo> detect_cycle(const Trace& trace, double cycle_tol) {
  CycleDetector detector(cycle_tol);
  for (const auto& r : trace.records)
    if (auto c = detector.push(r.x)) return c;
  return std::nullopt;
}

// --- divergence certificate ------------------------------------------------

std::optional<DivergenceCertificate> detect_linear_divergence(const Trace& trace, const HalfSpaced& h,
                                                              std::size_t window, double cycle_tol,
                                                              double membership_tol,
                                                              const ProjectableSet* set) {
  const std::size_t n = trace.size();
  if (window == 0 || n < window + 1) return std::nullopt;
  const std::size_t last = n - 1;
  const Vector& q = trace[last].q;
  const double increment = h.residual(q);
  if (!(increment > membership_tol)) return std::nullopt;
  const Vector& a = h.normal();

  auto step_matches = [&](std::size_t j) {
    const auto& r = trace[j];
    if ((r.q - q).cwiseAbs().maxCoeff() > cycle_tol) return false;
    if (h.residual(r.x) > membership_tol) return false;
    return ((trace[j + 1].x - r.x) + increment * a).cwiseAbs().maxCoeff() <= cycle_tol;
  };

  for (std::size_t j = last - window; j < last; ++j)
    if (!step_matches(j)) return std::nullopt;

  if (set) {
    const double reach = 1e6 * (1.0 + q.norm() + trace[last].x.norm());
    for (const Vector& p : set->project_all(q - reach * a))
      if (h.residual(p) < increment - membership_tol) return std::nullopt;
  }

  std::size_t start = last - window;
  while (start > 0 && step_matches(start - 1)) --start;

  DivergenceCertificate cert;
  cert.q_fixed = q;
  cert.increment = increment;
  cert.start_index = start;
  for (std::size_t j = start; j < last; ++j) cert.cumulative_offset.push_back(a.dot(q - trace[j + 1].x));
  return cert;
}

namespace {

double tail_min_d_qH(const Trace& trace, std::size_t window) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = trace.size();
  const std::size_t from = n > window ? n - window : 0;
  for (std::size_t j = from; j < n; ++j) best = std::min(best, trace[j].d_qH);
  return n ? best : 0.0;
}

IterateRecord make_record(std::size_t k, const Vector& x, const Vector& q,
                          const ReflectableConstraint& a) {
  IterateRecord r;
  r.k = k;
  r.x = x;
  r.q = q;
  r.d_xH = a.distance(x);
  r.d_qH = a.distance(q);
  r.d_xL = a.boundary_distance(x);
  r.d_qL = a.boundary_distance(q);
  return r;
}

using StepFn = std::function<GenericStep(const Vector& x, std::size_t k)>;

// Shared Douglas-Rachford driver; `step` supplies the selected q_k and x_{k+1}.
RunResult drive(const ReflectableConstraint& a, const ProjectableSet& b, const Vector& x0,
                const SolverConfig& cfg,
                std::uint64_t fingerprint, const StepFn& step) {
  RunResult result{Trace{{}, fingerprint}, outcome::MaxIterations{}};
  Trace& trace = result.trace;
  CycleDetector cycles(cfg.cycle_tol);
  const HalfSpaced* h = a.as_halfspace();

  Vector x = x0;
  for (std::size_t k = 0;; ++k) {
    GenericStep s;
    try {
      s = step(x, k);
    } catch (const DegenerateProjection& e) {
      result.outcome = outcome::DegenerateProjection{k, e.what()};
      return result;
    }
    trace.records.push_back(make_record(k, x, s.q, a));

    if (a.contains(s.q, cfg.membership_tol)) {
      result.outcome = outcome::Solved{s.q, k};
      return result;
    }
    if (auto c = cycles.push(x)) {
      result.outcome = outcome::Cycle{c->period, c->first_index};
      return result;
    }
    if (h) {
      if (auto cert = detect_linear_divergence(trace, *h, cfg.divergence_window, cfg.cycle_tol,
                                               cfg.membership_tol, &b)) {
        result.outcome = outcome::Diverging{std::move(*cert), tail_min_d_qH(trace, cfg.divergence_window)};
        return result;
      }
    }
    const bool blown = !s.next.allFinite() || s.next.norm() > cfg.norm_limit;
    if (blown || k == cfg.max_iter) {
      result.outcome = outcome::MaxIterations{trace.records.back().d_qH,
                                              tail_min_d_qH(trace, cfg.divergence_window), blown};
      return result;
    }
    x = std::move(s.next);
  }
}

void check_start(const Vector& x0, Eigen::Index dim) {
  require_finite(x0, "x0");
  check_dimension(dim, x0.size());
}

}  // namespace

std::uint64_t problem_fingerprint(const std::string& first, const std::string& second,
                                  const Vector& x0, const SolverConfig& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  mix(first);
  mix(second);
  mix(format_point(x0));
  mix(std::to_string(cfg.max_iter));
  mix(format_real(cfg.membership_tol));
  mix(format_real(cfg.cycle_tol));
  mix(std::to_string(cfg.divergence_window));
  mix(to_string(cfg.reflect_order));
  mix(to_string(cfg.tie_rule));
  mix(std::to_string(cfg.seed));
  return h;
}

RunResult run_dr(const ProjectableSet& q, const HalfSpaced& h, const Vector& x0,
                 const SolverConfig& cfg) {
  cfg.validate();
  check_dimension(h.dim(), q.dim());
  check_start(x0, h.dim());
  const HalfSpaceConstraint constraint(h);
  TieSelector ties(cfg);
  const double tol = cfg.membership_tol;
  return drive(constraint, q, x0, cfg, problem_fingerprint(constraint.describe(), q.describe(), x0, cfg),
               [&](const Vector& x, std::size_t k) {
                 Vector qk = ties.select(q.project_all(x), k);
                 Vector next = dr_step(x, qk, h, tol);
                 return GenericStep{std::move(next), std::move(qk)};
               });
}

RunResult run_dr_generic(const ReflectableConstraint& a, const ProjectableSet& b, const Vector& x0,
                         const SolverConfig& cfg) {
  cfg.validate();
  check_dimension(a.dim(), b.dim());
  check_start(x0, a.dim());
  TieSelector ties(cfg);
  return drive(a, b, x0, cfg, problem_fingerprint(a.describe(), b.describe(), x0, cfg),
               [&](const Vector& x, std::size_t k) { return dr_step_generic(x, a, b, cfg, ties, k); });
}

RunResult run_ap(const ProjectableSet& b, const ReflectableConstraint& a, const Vector& x0,
                 const SolverConfig& cfg) {
  cfg.validate();
  check_dimension(a.dim(), b.dim());
  check_start(x0, a.dim());
  TieSelector ties(cfg);
  RunResult result{Trace{{}, problem_fingerprint("ap:" + a.describe(), b.describe(), x0, cfg)},
                   outcome::MaxIterations{}};
  Trace& trace = result.trace;
  CycleDetector cycles[2] = {CycleDetector(cfg.cycle_tol), CycleDetector(cfg.cycle_tol)};

  Vector x = x0;
  for (std::size_t k = 0;; ++k) {
    Vector q;
    try {
      q = ties.select(b.project_all(x), k);
    } catch (const DegenerateProjection& e) {
      result.outcome = outcome::DegenerateProjection{k, e.what()};
      return result;
    }
    trace.records.push_back(make_record(k, x, q, a));
    if (a.contains(q, cfg.membership_tol)) {
      result.outcome = outcome::Solved{q, k};
      return result;
    }
    // A point seen as an x and later as a q has different successors, so
    // recurrences are matched within each role; positions are interleaved.
    for (std::size_t role = 0; role < 2; ++role) {
      if (auto c = cycles[role].push(role == 0 ? x : q)) {
        result.outcome = outcome::Cycle{2 * c->period, 2 * c->first_index + role};
        return result;
      }
    }
    if (k == cfg.max_iter) {
      result.outcome = outcome::MaxIterations{trace.records.back().d_qH,
                                              tail_min_d_qH(trace, cfg.divergence_window), false};
      return result;
    }
    x = a.project(q);
  }
}

RunResult run_ap(const ProjectableSet& b, const HalfSpaced& h, const Vector& x0,
                 const SolverConfig& cfg) {
  return run_ap(b, HalfSpaceConstraint(h), x0, cfg);
}

Trace dr_sequence(const ProjectableSet& q, const HalfSpaced& h, const Vector& x0, std::size_t steps,
                  const SolverConfig& cfg) {
  check_dimension(h.dim(), q.dim());
  check_start(x0, h.dim());
  const HalfSpaceConstraint constraint(h);
  TieSelector ties(cfg);
  Trace trace;
  trace.fingerprint = problem_fingerprint(constraint.describe(), q.describe(), x0, cfg);
  Vector x = x0;
  for (std::size_t k = 0; k <= steps; ++k) {
    Vector qk;
    try {
      qk = ties.select(q.project_all(x), k);
    } catch (const DegenerateProjection&) {
      break;
    }
    trace.records.push_back(make_record(k, x, qk, constraint));
    if (k == steps) break;
    x = dr_step(x, qk, h, cfg.membership_tol);
  }
  return trace;
}

}  // namespace drfeas
