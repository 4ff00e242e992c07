#pragma once

// Seeded randomized property suites for the half-space Douglas-Rachford
// operator. Every suite takes the step function under test, so that seeded
// mutants can demonstrate that a suite has power.
//
// Trial i of a suite draws everything from trial_seed(seed, i); a failure is
// replayed by running that single trial.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "drfeas/geometry.hpp"

namespace drfeas::verify {

/// Absolute tolerance for every asserted equality and inequality.
inline constexpr double kTolerance = 1e-9;

using StepFn = std::function<Vector(const Vector& x, const Vector& q, const HalfSpaced& h)>;

/// dr_step at the default membership tolerance.
StepFn reference_step();

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

struct Failure {
  std::size_t trial = 0;
  std::uint64_t trial_seed = 0;
  std::string detail;
};

struct PropertyReport {
  /// Only the first kMaxRecorded failures keep their counterexample.
  static constexpr std::size_t kMaxRecorded = 20;

  std::string id;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  /// Trials in which the property's hypothesis was met.
  std::size_t non_vacuous = 0;
  /// Trials that ran out of budget before an outcome could be judged.
  std::size_t inconclusive = 0;
  std::size_t failure_count = 0;
  std::vector<Failure> failures;

  /// No failures, and at most 1% of trials inconclusive.
  bool passed() const;
  void add_failure(Failure f);
  /// Associative; both reports must share id and seed.
  PropertyReport& merge(const PropertyReport& other);
};

struct SuiteOptions {
  std::size_t trials = 10000;
  int min_dim = 1;
  int max_dim = 5;
  std::uint64_t seed = 42;
  /// Trials run are [first_trial, first_trial + trials); lets a suite be
  /// split into shards whose reports merge.
  std::size_t first_trial = 0;
  /// Iteration budget for suites that run the full algorithm.
  std::size_t max_iter = 10000;
};

/// x in H implies every DR(x, q), q in P_Q(x), is in H.
PropertyReport check_halfspace_invariance(const SuiteOptions& opts, const StepFn& step = reference_step());

/// Case analysis for x outside H, including the two-step follow-ups.
PropertyReport check_outside_cases(const SuiteOptions& opts, const StepFn& step = reference_step());

/// x in H, q outside H: DR(x,q) = q - (d(x,L) + 2 d(q,L)) a and
/// d(DR(x,q), L) = d(q,L) + d(x,L).
PropertyReport check_inside_step(const SuiteOptions& opts, const StepFn& step = reference_step());

/// x in H, q in P_Q(x) \ H, z = DR(x,q): each p in P_Q(z) \ H other than q
/// satisfies d(p,H) + ||z - q|| <= d(q,H) + d(z,Q) and d(p,H) < d(q,H).
PropertyReport check_auxiliary_descent(const SuiteOptions& opts, const StepFn& step = reference_step());

/// While x stays outside H: d(q,H) < d(x,H) < 2 d(q,H) and d(x,L) strictly
/// decreases by d(q,H).
PropertyReport check_outside_monotonicity(const SuiteOptions& opts, const StepFn& step = reference_step());

/// Once x_k and q_k are in H: later q stay in H, d(q,L) never decreases, and
/// it is unchanged only when q is.
PropertyReport check_auxiliary_monotonicity(const SuiteOptions& opts, const StepFn& step = reference_step());

/// With x in H and a constant q in H, x becomes constant within the
/// number of steps bounded by (<a,2q-x> - b) / d(q,L).
PropertyReport check_eventual_constancy(const SuiteOptions& opts, const StepFn& step = reference_step());

/// Full runs on random finite and binary knapsack sets (alternating trials)
/// against a brute-force feasibility oracle: feasible problems end Solved
/// with a verified point, infeasible ones Diverging with a valid certificate.
PropertyReport check_finite_outcomes(const SuiteOptions& opts, const StepFn& step = reference_step());

namespace mutants {
/// Takes the first branch exactly when the correct operator takes the second.
Vector flipped_case(const Vector& x, const Vector& q, const HalfSpaced& h);
/// Second branch q + (<a,x> + b - <a,q>) a.
Vector no_factor_two(const Vector& x, const Vector& q, const HalfSpaced& h);
/// Second branch with the displacement along a negated.
Vector sign_flip(const Vector& x, const Vector& q, const HalfSpaced& h);
/// First branch returns the midpoint (x + q) / 2 instead of q.
Vector damped_first_branch(const Vector& x, const Vector& q, const HalfSpaced& h);
}  // namespace mutants

struct Suite {
  std::string id;
  std::function<PropertyReport(const SuiteOptions&, const StepFn&)> run;
  /// The documented mutant the suite must detect.
  std::string mutant_name;
  StepFn mutant;
};

const std::vector<Suite>& suites();
/// Throws InvalidArgument for an unknown id.
const Suite& find_suite(const std::string& id);

}  // namespace drfeas::verify
