#pragma once

// Problem files: a JSON description of a constraint, a set, a start point
// and optional solver settings.
//
//   {
//     "name": "optional label",
//     "constraint": {"type": "halfspace", "normal": [-2, 3], "offset": 0},
//     "set": {"type": "finite", "points": [[-2, -2], [-1, 0]]},
//     "x0": [0, 3],
//     "config": {"max_iter": 100, "tie_rule": "first"}
//   }
//
// constraint types and fields:
//   halfspace, hyperplane   normal, offset
//   slab                    normal, lower, upper
//   cone                    apex and either through: [p, r] or directions: [u, v]
//   diagonal                block_dim, blocks (default 2)
// set types and fields:
//   finite                  points
//   sphere                  center, radius
//   knapsack                weights, threshold, cap (default 24)
//   triadic                 depth (default 60)
//   product                 components: sets, or constraints viewed as sets
// config fields: max_iter, tol, cycle_tol, window, tie_rule, reflect_order,
// seed, norm_limit.
//
// Unknown fields are rejected and dimensions must agree.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "drfeas/engine.hpp"
#include "drfeas/errors.hpp"
#include "drfeas/sets.hpp"

namespace drfeas::cli {

/// Schema or dimension error in a problem file; the message starts with the
/// source and, where known, the JSON path or line:column.
class ProblemError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct HalfSpaceSpec {
  Vector normal;
  double offset = 0.0;
};
struct HyperplaneSpec {
  Vector normal;
  double offset = 0.0;
};
struct SlabSpec {
  Vector normal;
  double lower = 0.0;
  double upper = 0.0;
};
struct ConeSpec {
  Vector apex;
  Vector first;
  Vector second;
  /// first/second are boundary points rather than directions.
  bool through_points = true;
};
struct DiagonalSpec {
  Eigen::Index block_dim = 1;
  Eigen::Index blocks = 2;
};

using ConstraintSpec = std::variant<HalfSpaceSpec, HyperplaneSpec, SlabSpec, ConeSpec, DiagonalSpec>;

struct FiniteSpec {
  std::vector<Vector> points;
};
struct SphereSpec {
  Vector center;
  double radius = 1.0;
};
struct KnapsackSpec {
  Vector weights;
  double threshold = 0.0;
  int cap = BinaryKnapsackSet::kDefaultCap;
};
struct TriadicSpec {
  int depth = TriadicSet::kDefaultDepth;
};

struct SetSpec;
struct ProductSpec {
  std::vector<SetSpec> components;
};

struct SetSpec {
  std::variant<FiniteSpec, SphereSpec, KnapsackSpec, TriadicSpec, ProductSpec, ConstraintSpec> value;
};

struct ConfigOverrides {
  std::optional<std::size_t> max_iter;
  std::optional<double> tol;
  std::optional<double> cycle_tol;
  std::optional<std::size_t> window;
  std::optional<TieRule> tie_rule;
  std::optional<ReflectOrder> reflect_order;
  std::optional<std::uint64_t> seed;
  std::optional<double> norm_limit;

  /// Copies every set field onto `cfg`.
  void apply(SolverConfig& cfg) const;
};

struct ProblemFile {
  std::string name;
  ConstraintSpec constraint;
  SetSpec set;
  Vector x0;
  ConfigOverrides config;
};

bool operator==(const ProblemFile& a, const ProblemFile& b);
inline bool operator!=(const ProblemFile& a, const ProblemFile& b) { return !(a == b); }

/// Throws ProblemError; malformed JSON is reported as source:line:column.
ProblemFile parse_problem(const std::string& text, const std::string& source = "<input>");
ProblemFile load_problem(const std::string& path);
/// Canonical JSON; parse_problem(serialize_problem(p)) == p.
std::string serialize_problem(const ProblemFile& p);

/// Solver-ready objects.
struct Problem {
  ConstraintPtr constraint;
  SetPtr set;
  Vector x0;
  SolverConfig config;

  /// Non-null when the constraint is a half-space.
  const HalfSpaced* halfspace() const { return constraint->as_halfspace(); }
};

/// Builds the sets and checks that constraint, set and x0 agree in dimension.
Problem build_problem(const ProblemFile& file);

}  // namespace drfeas::cli
