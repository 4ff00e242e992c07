#pragma once

// Douglas-Rachford and alternating-projection drivers.
//
// A run alternates between selecting q_k from the nearest points of the set
// Q and updating x_k. It stops as soon as the selected q_k lies in the
// constraint (the implementable stopping rule, as opposed to a fixed-point
// residual), when the state x_k recurs, when the trace shows the linear
// divergence pattern of an infeasible half-space problem, or when the
// iteration budget is spent. Every iterate is recorded.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "drfeas/dr_step.hpp"
#include "drfeas/geometry.hpp"
#include "drfeas/sets.hpp"

namespace drfeas {

enum class TieRule { first, rotate, random };
enum class ReflectOrder { set_first, constraint_first };

struct SolverConfig {
  std::size_t max_iter = 10000;
  double membership_tol = kMembershipTolerance;
  double cycle_tol = 1e-9;
  std::size_t divergence_window = 25;
  ReflectOrder reflect_order = ReflectOrder::set_first;
  TieRule tie_rule = TieRule::first;
  std::uint64_t seed = 0;
  /// Norm beyond which a run without a certificate is abandoned.
  double norm_limit = 1e12;

  /// Throws InvalidArgument on non-positive tolerances or a zero budget.
  void validate() const;
};

std::string to_string(TieRule rule);
std::string to_string(ReflectOrder order);
TieRule parse_tie_rule(const std::string& s);
ReflectOrder parse_reflect_order(const std::string& s);

struct IterateRecord {
  std::size_t k = 0;
  Vector x;
  Vector q;
  double d_xH = 0.0;
  double d_qH = 0.0;
  double d_xL = 0.0;
  double d_qL = 0.0;
};

struct Trace {
  std::vector<IterateRecord> records;
  std::uint64_t fingerprint = 0;

  std::size_t size() const { return records.size(); }
  const IterateRecord& operator[](std::size_t k) const { return records[k]; }
};

/// Observed tail x_{j+1} = q - lambda_j a with q fixed outside H and every
/// x_j inside H.
struct DivergenceCertificate {
  Vector q_fixed;
  double increment = 0.0;
  std::size_t start_index = 0;
  /// lambda_j for j = start_index, start_index + 1, ...
  std::vector<double> cumulative_offset;
};

struct CycleInfo {
  std::size_t period = 0;
  std::size_t first_index = 0;
};

namespace outcome {

struct Solved {
  Vector solution;
  std::size_t iterations = 0;
};

struct Diverging {
  DivergenceCertificate certificate;
  double beta_estimate = 0.0;
};

struct Cycle {
  std::size_t period = 0;
  std::size_t first_index = 0;
};

struct MaxIterations {
  double final_d_qH = 0.0;
  double beta_estimate = 0.0;
  /// The norm limit was hit before the budget.
  bool norm_limit_hit = false;
};

struct DegenerateProjection {
  std::size_t index = 0;
  std::string message;
};

}  // namespace outcome

using RunOutcome = std::variant<outcome::Solved, outcome::Diverging, outcome::Cycle,
                                outcome::MaxIterations, outcome::DegenerateProjection>;

std::string outcome_name(const RunOutcome& o);
std::string describe(const RunOutcome& o);

struct RunResult {
  Trace trace;
  RunOutcome outcome;

  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(outcome);
  }
  template <typename T>
  const T& as() const {
    return std::get<T>(outcome);
  }
};

/// Picks one point from a tie set according to the configured rule.
class TieSelector {
 public:
  explicit TieSelector(const SolverConfig& cfg) : rule_(cfg.tie_rule), rng_(cfg.seed) {}

  std::size_t pick(std::size_t ties, std::size_t k);
  const Vector& select(const std::vector<Vector>& ties, std::size_t k) {
    return ties[pick(ties.size(), k)];
  }

 private:
  TieRule rule_;
  std::mt19937_64 rng_;
};

struct GenericStep {
  Vector next;
  Vector q;
};

/// One Douglas-Rachford step for a convex constraint A and a set B.
/// set_first:        q in P_B(x),          x' = (x + R_A(2q - x)) / 2
/// constraint_first: q in P_B(2 P_A x - x), x' = x + q - P_A(x)
GenericStep dr_step_generic(const Vector& x, const ReflectableConstraint& a, const ProjectableSet& b,
                            const SolverConfig& cfg, TieSelector& ties, std::size_t k = 0);
GenericStep dr_step_generic(const Vector& x, const ReflectableConstraint& a, const ProjectableSet& b,
                            const SolverConfig& cfg);

RunResult run_dr(const ProjectableSet& q, const HalfSpaced& h, const Vector& x0,
                 const SolverConfig& cfg = {});

RunResult run_dr_generic(const ReflectableConstraint& a, const ProjectableSet& b, const Vector& x0,
                         const SolverConfig& cfg = {});

/// Alternating projections x_{k+1} = P_A(q_k), q_k in P_B(x_k). Cycles are
/// detected on the interleaved sequence x_0, q_0, x_1, q_1, ..., so a
/// reported period counts both projections.
RunResult run_ap(const ProjectableSet& b, const ReflectableConstraint& a, const Vector& x0,
                 const SolverConfig& cfg = {});
RunResult run_ap(const ProjectableSet& b, const HalfSpaced& h, const Vector& x0,
                 const SolverConfig& cfg = {});

/// The raw iteration x_{k+1} = DR(x_k, q_k) for `steps` steps, with no
/// stopping rule. Returns steps + 1 records (fewer if a projection is
/// degenerate).
Trace dr_sequence(const ProjectableSet& q, const HalfSpaced& h, const Vector& x0, std::size_t steps,
                  const SolverConfig& cfg = {});

/// First recurrence of a quantized state in `points`.
std::optional<CycleInfo> detect_cycle(const std::vector<Vector>& points, double cycle_tol);
/// Recurrence of x_k over a trace.
std::optional<CycleInfo> detect_cycle(const Trace& trace, double cycle_tol);

/// Checks the last `window` steps of the trace for constant q outside H,
/// x inside H, and x_{j+1} - x_j = -d(q,L) a.
///
/// When `set` is given, the pattern must also persist: the nearest points of
/// q - R a for a large R (far along the observed ray) may not be closer to H
/// than q. Without it a window of constant q can precede a switch to a
/// point nearer H, and the certificate would misreport feasible problems.
std::optional<DivergenceCertificate> detect_linear_divergence(const Trace& trace, const HalfSpaced& h,
                                                              std::size_t window, double cycle_tol,
                                                              double membership_tol = kMembershipTolerance,
                                                              const ProjectableSet* set = nullptr);

/// Incremental quantized-state recurrence detector.
class CycleDetector {
 public:
  explicit CycleDetector(double cycle_tol) : tol_(cycle_tol) {}

  /// Returns the cycle closed by `x`, if any.
  std::optional<CycleInfo> push(const Vector& x);
  std::size_t size() const { return count_; }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<double>& key) const;
  };

  double tol_;
  std::size_t count_ = 0;
  std::unordered_map<std::vector<double>, std::size_t, KeyHash> seen_;
};

/// FNV-1a over the problem description, start point and configuration.
std::uint64_t problem_fingerprint(const std::string& first, const std::string& second,
                                  const Vector& x0, const SolverConfig& cfg);

}  // namespace drfeas
