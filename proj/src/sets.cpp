#include "drfeas/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drfeas/dr_step.hpp"
#include "drfeas/format.hpp"

namespace drfeas {

namespace {

// Points of `candidates` whose squared distance is within tie_tol of the
// minimum, in input order.
std::vector<Vector> nearest_of(const std::vector<Vector>& candidates, const Vector& x,
                               double tie_tol) {
  std::vector<double> d2(candidates.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    d2[i] = (candidates[i] - x).squaredNorm();
    best = std::min(best, d2[i]);
  }
  std::vector<Vector> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (d2[i] <= best + tie_tol) out.push_back(candidates[i]);
  return out;
}

}  // namespace

double ProjectableSet::distance(const Vector& x) const {
  return (project_all(x).front() - x).norm();
}

Vector ReflectableConstraint::reflect(const Vector& x) const { return 2.0 * project(x) - x; }

double ReflectableConstraint::distance(const Vector& x) const { return (x - project(x)).norm(); }

bool ReflectableConstraint::contains(const Vector& x, double tol) const {
  return distance(x) <= tol;
}

Vector ReflectableConstraint::reflect_average(const Vector& x, const Vector& q, double) const {
  check_dimension(dim(), x.size());
  check_dimension(dim(), q.size());
  return 0.5 * (x + reflect(2.0 * q - x));
}

// --- FinitePointSet --------------------------------------------------------

FinitePointSet::FinitePointSet(std::vector<Vector> points, double tie_tol) : tie_tol_(tie_tol) {
  if (points.empty()) throw InvalidArgument("finite set: no points");
  const Eigen::Index n = points.front().size();
  for (auto& p : points) {
    require_finite(p, "finite set point");
    check_dimension(n, p.size());
    const bool seen = std::any_of(points_.begin(), points_.end(),
                                  [&](const Vector& q) { return q == p; });
    if (!seen) points_.push_back(std::move(p));
  }
}

std::vector<Vector> FinitePointSet::project_all(const Vector& x) const {
  check_dimension(dim(), x.size());
  return nearest_of(points_, x, tie_tol_);
}

bool FinitePointSet::contains(const Vector& x, double tol) const {
  check_dimension(dim(), x.size());
  return std::any_of(points_.begin(), points_.end(),
                     [&](const Vector& p) { return (p - x).norm() <= tol; });
}

std::string FinitePointSet::describe() const {
  std::string out = "finite[";
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i) out += ';';
    out += format_point(points_[i]);
  }
  return out + "]";
}

// --- Sphere ----------------------------------------------------------------

Sphere::Sphere(Vector center, double radius) : center_(std::move(center)), radius_(radius) {
  require_finite(center_, "sphere center");
  if (!(radius_ > 0.0) || !std::isfinite(radius_))
    throw InvalidArgument("sphere radius must be positive and finite");
}

std::vector<Vector> Sphere::project_all(const Vector& x) const {
  check_dimension(dim(), x.size());
  const Vector offset = x - center_;
  const double len = offset.norm();
  if (len <= 1e-12) throw DegenerateProjection("sphere: projection of the centre is the whole sphere");
  return {center_ + radius_ * offset / len};
}

double Sphere::distance(const Vector& x) const {
  check_dimension(dim(), x.size());
  return std::abs((x - center_).norm() - radius_);
}

bool Sphere::contains(const Vector& x, double tol) const { return distance(x) <= tol; }

std::string Sphere::describe() const {
  return "sphere[" + format_point(center_) + ";" + format_real(radius_) + "]";
}

// --- BinaryKnapsackSet -------------------------------------------------------

BinaryKnapsackSet::BinaryKnapsackSet(Vector weights, double threshold, int cap, double tie_tol)
    : weights_(std::move(weights)), threshold_(threshold), tie_tol_(tie_tol) {
  require_finite(weights_, "knapsack weights");
  if ((weights_.array() < 0.0).any()) throw InvalidArgument("knapsack weights must be nonnegative");
  if (!(threshold_ >= 0.0) || !std::isfinite(threshold_))
    throw InvalidArgument("knapsack threshold must be nonnegative and finite");
  if (cap > 31) cap = 31;
  if (weights_.size() > cap)
    throw CapExceeded("knapsack dimension " + std::to_string(weights_.size()) + " exceeds cap " +
                      std::to_string(cap));
  if (weights_.sum() < threshold_) throw EmptySet("knapsack set is empty: sum of weights < threshold");
}

Vector BinaryKnapsackSet::point_from_mask(std::uint32_t mask) const {
  const Eigen::Index m = dim();
  Vector y(m);
  for (Eigen::Index i = 0; i < m; ++i) y[i] = static_cast<double>((mask >> (m - 1 - i)) & 1u);
  return y;
}

bool BinaryKnapsackSet::feasible_mask(std::uint32_t mask) const {
  const Eigen::Index m = dim();
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    if ((mask >> (m - 1 - i)) & 1u) total += weights_[i];
  return total >= threshold_;
}

std::vector<Vector> BinaryKnapsackSet::project_all(const Vector& x) const {
  const Eigen::Index m = dim();
  check_dimension(m, x.size());
  const std::uint32_t count = std::uint32_t{1} << m;

  // Per-coordinate cost of a zero and of a one; the squared distance of a
  // mask is the sum of the matching costs.
  const Eigen::ArrayXd cost0 = x.array().square();
  const Eigen::ArrayXd cost1 = (x.array() - 1.0).square();

  std::vector<std::pair<std::uint32_t, double>> feasible;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    if (!feasible_mask(mask)) continue;
    double d2 = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) d2 += ((mask >> (m - 1 - i)) & 1u) ? cost1[i] : cost0[i];
    feasible.emplace_back(mask, d2);
    best = std::min(best, d2);
  }
  std::vector<Vector> out;
  for (const auto& [mask, d2] : feasible)
    if (d2 <= best + tie_tol_) out.push_back(point_from_mask(mask));
  return out;
}

bool BinaryKnapsackSet::contains(const Vector& x, double tol) const {
  check_dimension(dim(), x.size());
  const Vector rounded = x.array().round().matrix();
  if ((rounded - x).cwiseAbs().maxCoeff() > tol) return false;
  if ((rounded.array() != 0.0 && rounded.array() != 1.0).any()) return false;
  return weights_.dot(rounded) >= threshold_;
}

std::string BinaryKnapsackSet::describe() const {
  return "knapsack[" + format_point(weights_) + ";" + format_real(threshold_) + "]";
}

// --- TriadicSet --------------------------------------------------------------

TriadicSet::TriadicSet(int depth, double tie_tol) : depth_(depth), tie_tol_(tie_tol) {
  if (depth_ < 0) throw InvalidArgument("triadic depth must be nonnegative");
  values_.reserve(static_cast<std::size_t>(depth_) + 2);
  values_.push_back(0.0);
  for (int k = depth_; k >= 0; --k) values_.push_back(2.0 / std::pow(3.0, k));
}

std::vector<Vector> TriadicSet::project_all(const Vector& x) const {
  check_dimension(1, x.size());
  const double v = x[0];
  const auto it = std::lower_bound(values_.begin(), values_.end(), v);
  std::vector<Vector> candidates;
  if (it != values_.begin()) candidates.push_back(Vector::Constant(1, *std::prev(it)));
  if (it != values_.end()) candidates.push_back(Vector::Constant(1, *it));
  // Relative below |x| = 1, so that ties stay meaningful near the accumulation point.
  return nearest_of(candidates, x, tie_tol_ * std::min(1.0, v * v));
}

bool TriadicSet::contains(const Vector& x, double tol) const {
  return (project_all(x).front() - x).norm() <= tol;
}

std::string TriadicSet::describe() const { return "triadic[" + std::to_string(depth_) + "]"; }

// --- ProductSet ------------------------------------------------------------

ProductSet::ProductSet(std::vector<SetPtr> components) : components_(std::move(components)) {
  if (components_.empty()) throw InvalidArgument("product set: no components");
  for (const auto& c : components_) {
    if (!c) throw InvalidArgument("product set: null component");
    dim_ += c->dim();
  }
}

std::vector<Vector> ProductSet::project_all(const Vector& x) const {
  check_dimension(dim_, x.size());
  std::vector<Vector> out{Vector(0)};
  Eigen::Index offset = 0;
  for (const auto& c : components_) {
    const auto block = c->project_all(x.segment(offset, c->dim()));
    std::vector<Vector> next;
    next.reserve(out.size() * block.size());
    for (const auto& prefix : out) {
      for (const auto& b : block) {
        Vector joined(prefix.size() + b.size());
        joined << prefix, b;
        next.push_back(std::move(joined));
      }
    }
    out = std::move(next);
    offset += c->dim();
  }
  return out;
}

double ProductSet::distance(const Vector& x) const {
  check_dimension(dim_, x.size());
  double d2 = 0.0;
  Eigen::Index offset = 0;
  for (const auto& c : components_) {
    const double d = c->distance(x.segment(offset, c->dim()));
    d2 += d * d;
    offset += c->dim();
  }
  return std::sqrt(d2);
}

bool ProductSet::contains(const Vector& x, double tol) const {
  check_dimension(dim_, x.size());
  Eigen::Index offset = 0;
  for (const auto& c : components_) {
    if (!c->contains(x.segment(offset, c->dim()), tol)) return false;
    offset += c->dim();
  }
  return true;
}

std::string ProductSet::describe() const {
  std::string out = "product[";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) out += ';';
    out += components_[i]->describe();
  }
  return out + "]";
}

// --- ConstraintSet ---------------------------------------------------------

ConstraintSet::ConstraintSet(ConstraintPtr constraint) : constraint_(std::move(constraint)) {
  if (!constraint_) throw InvalidArgument("constraint set: null constraint");
}

std::vector<Vector> ConstraintSet::project_all(const Vector& x) const {
  return {constraint_->project(x)};
}

double ConstraintSet::distance(const Vector& x) const { return constraint_->distance(x); }

bool ConstraintSet::contains(const Vector& x, double tol) const {
  return constraint_->contains(x, tol);
}

std::string ConstraintSet::describe() const { return constraint_->describe(); }

// --- HalfSpaceConstraint -----------------------------------------------------

Vector HalfSpaceConstraint::project(const Vector& x) const { return drfeas::project(h_, x); }
Vector HalfSpaceConstraint::reflect(const Vector& x) const { return drfeas::reflect(h_, x); }
double HalfSpaceConstraint::distance(const Vector& x) const { return drfeas::distance(h_, x); }

bool HalfSpaceConstraint::contains(const Vector& x, double tol) const {
  return h_.contains(x, tol);
}

double HalfSpaceConstraint::boundary_distance(const Vector& x) const {
  return drfeas::distance(h_.boundary(), x);
}

Vector HalfSpaceConstraint::reflect_average(const Vector& x, const Vector& q, double tol) const {
  return dr_step(x, q, h_, tol);
}

std::string HalfSpaceConstraint::describe() const {
  return "halfspace[" + format_point(h_.normal()) + ";" + format_real(h_.offset()) + "]";
}

// --- HyperplaneConstraint ----------------------------------------------------

Vector HyperplaneConstraint::project(const Vector& x) const { return drfeas::project(l_, x); }
Vector HyperplaneConstraint::reflect(const Vector& x) const { return drfeas::reflect(l_, x); }
double HyperplaneConstraint::distance(const Vector& x) const { return drfeas::distance(l_, x); }

bool HyperplaneConstraint::contains(const Vector& x, double tol) const {
  return l_.contains(x, tol);
}

double HyperplaneConstraint::boundary_distance(const Vector& x) const { return distance(x); }

Vector HyperplaneConstraint::reflect_average(const Vector& x, const Vector& q, double) const {
  check_dimension(dim(), x.size());
  check_dimension(dim(), q.size());
  const auto& a = l_.normal();
  return q + (a.dot(x) + l_.offset() - 2.0 * a.dot(q)) * a;
}

std::string HyperplaneConstraint::describe() const {
  return "hyperplane[" + format_point(l_.normal()) + ";" + format_real(l_.offset()) + "]";
}

// --- Slab -------------------------------------------------------------------

Slab::Slab(const Vector& normal, double lower, double upper) {
  require_finite(normal, "slab normal");
  if (!std::isfinite(lower) || !std::isfinite(upper)) throw InvalidArgument("slab bounds must be finite");
  if (!(lower < upper)) throw InvalidArgument("slab requires lower < upper");
  const double len = normal.norm();
  if (!(len > 0.0)) throw InvalidArgument("slab normal: zero vector");
  normal_ = normal / len;
  lower_ = lower / len;
  upper_ = upper / len;
}

Vector Slab::project(const Vector& x) const {
  check_dimension(dim(), x.size());
  const double r = normal_.dot(x);
  const double clamped = std::clamp(r, lower_, upper_);
  if (clamped == r) return x;
  return x + (clamped - r) * normal_;
}

double Slab::distance(const Vector& x) const {
  check_dimension(dim(), x.size());
  const double r = normal_.dot(x);
  return std::max({0.0, lower_ - r, r - upper_});
}

bool Slab::contains(const Vector& x, double tol) const { return distance(x) <= tol; }

double Slab::boundary_distance(const Vector& x) const {
  check_dimension(dim(), x.size());
  const double r = normal_.dot(x);
  return std::min(std::abs(r - lower_), std::abs(r - upper_));
}

std::string Slab::describe() const {
  return "slab[" + format_point(normal_) + ";" + format_real(lower_) + ";" + format_real(upper_) + "]";
}

// --- PlanarCone --------------------------------------------------------------

PlanarCone::PlanarCone(const Vector& apex, const Vector& u, const Vector& v) : apex_(apex) {
  require_finite(apex, "cone apex");
  require_finite(u, "cone direction");
  require_finite(v, "cone direction");
  check_dimension(2, apex.size());
  check_dimension(2, u.size());
  check_dimension(2, v.size());
  const double lu = u.norm();
  const double lv = v.norm();
  if (!(lu > 0.0) || !(lv > 0.0)) throw InvalidArgument("cone direction: zero vector");
  u_ = u / lu;
  v_ = v / lv;
  Eigen::Matrix2d basis;
  basis << u_, v_;
  if (std::abs(basis.determinant()) < 1e-12)
    throw InvalidArgument("cone directions must be linearly independent");
  basis_inverse_ = basis.inverse();
}

PlanarCone PlanarCone::through_points(const Vector& apex, const Vector& p, const Vector& r) {
  check_dimension(2, apex.size());
  check_dimension(2, p.size());
  check_dimension(2, r.size());
  return PlanarCone(apex, p - apex, r - apex);
}

Eigen::Vector2d PlanarCone::coordinates(const Vector& x) const {
  check_dimension(2, x.size());
  return basis_inverse_ * (x - apex_);
}

Vector PlanarCone::foot_on_ray(const Vector& x, const Vector& dir) const {
  const double s = std::max(0.0, dir.dot(x - apex_));
  return apex_ + s * dir;
}

Vector PlanarCone::project(const Vector& x) const {
  const Eigen::Vector2d st = coordinates(x);
  if (st[0] >= 0.0 && st[1] >= 0.0) return x;
  // Outside a pointed cone the nearest point lies on one of the two rays
  // (possibly the apex), and every point of either ray is in the cone.
  Vector best = foot_on_ray(x, u_);
  Vector other = foot_on_ray(x, v_);
  if ((other - x).squaredNorm() < (best - x).squaredNorm()) best = std::move(other);
  return best;
}

bool PlanarCone::contains(const Vector& x, double tol) const {
  const Eigen::Vector2d st = coordinates(x);
  if (st[0] >= 0.0 && st[1] >= 0.0) return true;
  return distance(x) <= tol;
}

double PlanarCone::boundary_distance(const Vector& x) const {
  const Eigen::Vector2d st = coordinates(x);
  if (!(st[0] >= 0.0 && st[1] >= 0.0)) return distance(x);
  return std::min((foot_on_ray(x, u_) - x).norm(), (foot_on_ray(x, v_) - x).norm());
}

std::string PlanarCone::describe() const {
  return "cone[" + format_point(apex_) + ";" + format_point(u_) + ";" + format_point(v_) + "]";
}

// --- DiagonalSet -------------------------------------------------------------

DiagonalSet::DiagonalSet(Eigen::Index block_dim, Eigen::Index blocks)
    : block_dim_(block_dim), blocks_(blocks) {
  if (block_dim_ < 1) throw InvalidArgument("diagonal block dimension must be >= 1");
  if (blocks_ < 2) throw InvalidArgument("diagonal requires at least two blocks");
}

Vector DiagonalSet::project(const Vector& x) const {
  check_dimension(dim(), x.size());
  const auto stacked = x.reshaped(block_dim_, blocks_);
  const Vector mean = stacked.rowwise().mean();
  return mean.replicate(blocks_, 1);
}

double DiagonalSet::boundary_distance(const Vector& x) const { return distance(x); }

std::string DiagonalSet::describe() const {
  return "diagonal[" + std::to_string(block_dim_) + "x" + std::to_string(blocks_) + "]";
}

}  // namespace drfeas
