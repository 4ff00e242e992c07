#pragma once

// The two sides of a two-set feasibility problem:
//
//  * ProjectableSet: a closed, possibly non-convex set with a multi-valued
//    nearest-point map (finite sets, spheres, binary knapsack sets, ...).
//  * ReflectableConstraint: a closed convex set with a single-valued
//    projector (half-spaces, hyperplanes, slabs, planar cones, the diagonal).
//
// Both are immutable after construction.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "drfeas/geometry.hpp"

namespace drfeas {

/// Absolute tolerance on squared distances under which two candidates are
/// reported as tied nearest points.
inline constexpr double kTieTolerance = 1e-12;

class ProjectableSet {
 public:
  virtual ~ProjectableSet() = default;

  virtual Eigen::Index dim() const = 0;

  /// All nearest points of x, in a deterministic order. Never empty.
  virtual std::vector<Vector> project_all(const Vector& x) const = 0;

  virtual double distance(const Vector& x) const;
  virtual bool contains(const Vector& x, double tol) const = 0;

  /// Canonical textual form; used for fingerprints and diagnostics.
  virtual std::string describe() const = 0;
};

class ReflectableConstraint {
 public:
  virtual ~ReflectableConstraint() = default;

  virtual Eigen::Index dim() const = 0;
  virtual Vector project(const Vector& x) const = 0;
  virtual Vector reflect(const Vector& x) const;
  virtual double distance(const Vector& x) const;
  virtual bool contains(const Vector& x, double tol) const;

  /// Distance to the topological boundary of the set.
  virtual double boundary_distance(const Vector& x) const = 0;

  /// (x + R(2q - x)) / 2, the set-first Douglas-Rachford combination for a
  /// selected q. Constraints with a closed form override this.
  virtual Vector reflect_average(const Vector& x, const Vector& q, double tol) const;

  /// Non-null when the constraint is a half-space; enables the divergence
  /// certificate in the generic driver.
  virtual const HalfSpaced* as_halfspace() const { return nullptr; }

  virtual std::string describe() const = 0;
};

using SetPtr = std::shared_ptr<const ProjectableSet>;
using ConstraintPtr = std::shared_ptr<const ReflectableConstraint>;

// ---------------------------------------------------------------------------
// Projectable sets

class FinitePointSet final : public ProjectableSet {
 public:
  /// Exact duplicates are dropped, keeping the first occurrence.
  explicit FinitePointSet(std::vector<Vector> points, double tie_tol = kTieTolerance);

  const std::vector<Vector>& points() const { return points_; }

  Eigen::Index dim() const override { return points_.front().size(); }
  std::vector<Vector> project_all(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  std::string describe() const override;

 private:
  std::vector<Vector> points_;
  double tie_tol_;
};

class Sphere final : public ProjectableSet {
 public:
  Sphere(Vector center, double radius);

  const Vector& center() const { return center_; }
  double radius() const { return radius_; }

  Eigen::Index dim() const override { return center_.size(); }
  /// Throws DegenerateProjection at the centre.
  std::vector<Vector> project_all(const Vector& x) const override;
  double distance(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  std::string describe() const override;

 private:
  Vector center_;
  double radius_;
};

/// {y in {0,1}^m : <c,y> >= threshold}, projected by exhaustive enumeration.
class BinaryKnapsackSet final : public ProjectableSet {
 public:
  static constexpr int kDefaultCap = 24;

  BinaryKnapsackSet(Vector weights, double threshold, int cap = kDefaultCap,
                    double tie_tol = kTieTolerance);

  const Vector& weights() const { return weights_; }
  double threshold() const { return threshold_; }

  Eigen::Index dim() const override { return weights_.size(); }
  /// Ties are ordered by the point read as a bit string, first coordinate
  /// most significant.
  std::vector<Vector> project_all(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  std::string describe() const override;

  bool feasible_mask(std::uint32_t mask) const;
  Vector point_from_mask(std::uint32_t mask) const;

 private:
  Vector weights_;
  double threshold_;
  double tie_tol_;
};

/// {2/3^k : 0 <= k <= depth} U {0} on the real line. Only the two values
/// bracketing x compete, and the tie tolerance is scaled by min(1, x^2): the
/// set accumulates at 0, where an absolute tolerance would tie every value.
class TriadicSet final : public ProjectableSet {
 public:
  static constexpr int kDefaultDepth = 60;

  explicit TriadicSet(int depth = kDefaultDepth, double tie_tol = kTieTolerance);

  int depth() const { return depth_; }
  /// Ascending.
  const std::vector<double>& values() const { return values_; }

  Eigen::Index dim() const override { return 1; }
  std::vector<Vector> project_all(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  std::string describe() const override;

 private:
  int depth_;
  double tie_tol_;
  std::vector<double> values_;
};

/// Cartesian product; projection acts blockwise and tie sets combine
/// lexicographically (first block varies slowest).
class ProductSet final : public ProjectableSet {
 public:
  explicit ProductSet(std::vector<SetPtr> components);

  const std::vector<SetPtr>& components() const { return components_; }

  Eigen::Index dim() const override { return dim_; }
  std::vector<Vector> project_all(const Vector& x) const override;
  double distance(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  std::string describe() const override;

 private:
  std::vector<SetPtr> components_;
  Eigen::Index dim_ = 0;
};

/// Views a convex constraint as a set with a single-valued projector.
class ConstraintSet final : public ProjectableSet {
 public:
  explicit ConstraintSet(ConstraintPtr constraint);

  const ConstraintPtr& constraint() const { return constraint_; }

  Eigen::Index dim() const override { return constraint_->dim(); }
  std::vector<Vector> project_all(const Vector& x) const override;
  double distance(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  std::string describe() const override;

 private:
  ConstraintPtr constraint_;
};

// ---------------------------------------------------------------------------
// Reflectable constraints

class HalfSpaceConstraint final : public ReflectableConstraint {
 public:
  explicit HalfSpaceConstraint(HalfSpaced h) : h_(std::move(h)) {}

  const HalfSpaced& halfspace() const { return h_; }

  Eigen::Index dim() const override { return h_.dim(); }
  Vector project(const Vector& x) const override;
  Vector reflect(const Vector& x) const override;
  double distance(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  double boundary_distance(const Vector& x) const override;
  Vector reflect_average(const Vector& x, const Vector& q, double tol) const override;
  const HalfSpaced* as_halfspace() const override { return &h_; }
  std::string describe() const override;

 private:
  HalfSpaced h_;
};

class HyperplaneConstraint final : public ReflectableConstraint {
 public:
  explicit HyperplaneConstraint(Hyperplaned l) : l_(std::move(l)) {}

  const Hyperplaned& hyperplane() const { return l_; }

  Eigen::Index dim() const override { return l_.dim(); }
  Vector project(const Vector& x) const override;
  Vector reflect(const Vector& x) const override;
  double distance(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  double boundary_distance(const Vector& x) const override;
  Vector reflect_average(const Vector& x, const Vector& q, double tol) const override;
  std::string describe() const override;

 private:
  Hyperplaned l_;
};

/// {x : lower <= <a,x> <= upper}
class Slab final : public ReflectableConstraint {
 public:
  Slab(const Vector& normal, double lower, double upper);

  const Vector& normal() const { return normal_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }

  Eigen::Index dim() const override { return normal_.size(); }
  Vector project(const Vector& x) const override;
  double distance(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  double boundary_distance(const Vector& x) const override;
  std::string describe() const override;

 private:
  Vector normal_;
  double lower_;
  double upper_;
};

/// {apex + s u + t v : s, t >= 0} in the plane, with u and v linearly
/// independent unit vectors.
class PlanarCone final : public ReflectableConstraint {
 public:
  PlanarCone(const Vector& apex, const Vector& u, const Vector& v);

  /// Directions taken from the apex toward two boundary points.
  static PlanarCone through_points(const Vector& apex, const Vector& p, const Vector& r);

  const Vector& apex() const { return apex_; }
  const Vector& u() const { return u_; }
  const Vector& v() const { return v_; }

  Eigen::Index dim() const override { return 2; }
  Vector project(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  double boundary_distance(const Vector& x) const override;
  std::string describe() const override;

  /// Coefficients (s, t) with x - apex = s u + t v.
  Eigen::Vector2d coordinates(const Vector& x) const;

 private:
  Vector foot_on_ray(const Vector& x, const Vector& dir) const;

  Vector apex_;
  Vector u_;
  Vector v_;
  Eigen::Matrix2d basis_inverse_;
};

/// {(x_1, ..., x_m) : x_1 = ... = x_m} in (R^n)^m.
class DiagonalSet final : public ReflectableConstraint {
 public:
  explicit DiagonalSet(Eigen::Index block_dim, Eigen::Index blocks = 2);

  Eigen::Index block_dim() const { return block_dim_; }
  Eigen::Index blocks() const { return blocks_; }

  Eigen::Index dim() const override { return block_dim_ * blocks_; }
  Vector project(const Vector& x) const override;
  double boundary_distance(const Vector& x) const override;
  std::string describe() const override;

 private:
  Eigen::Index block_dim_;
  Eigen::Index blocks_;
};

}  // namespace drfeas
