#pragma once

// Brute-force references for the projection and feasibility tests. These
// deliberately avoid the library's projection code paths.

#include <cmath>
#include <functional>
#include <vector>

#include "drfeas/geometry.hpp"

namespace oracle {

using drfeas::Vector;

inline double squared_distance(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

/// All minimizers of ||x - p|| over `points` (squared distances within
/// `tie_tol` of the best), in input order.
inline std::vector<Vector> nearest(const std::vector<Vector>& points, const Vector& x,
                                   double tie_tol = 1e-12) {
  double best = squared_distance(points[0], x);
  for (const auto& p : points) best = std::min(best, squared_distance(p, x));
  std::vector<Vector> out;
  for (const auto& p : points)
    if (squared_distance(p, x) - best <= tie_tol) out.push_back(p);
  return out;
}

/// Every y in {0,1}^m with <c,y> >= lambda, in lexicographic order.
inline std::vector<Vector> knapsack_points(const Vector& c, double lambda) {
  const Eigen::Index m = c.size();
  std::vector<Vector> out;
  Vector y = Vector::Zero(m);
  std::function<void(Eigen::Index, double)> rec = [&](Eigen::Index i, double weight) {
    if (i == m) {
      if (weight >= lambda) out.push_back(y);
      return;
    }
    for (int bit = 0; bit <= 1; ++bit) {
      y[i] = bit;
      rec(i + 1, weight + bit * c[i]);
    }
    y[i] = 0;
  };
  rec(0, 0.0);
  return out;
}

/// {2/3^k : 0 <= k <= depth} U {0}, built by repeated division.
inline std::vector<Vector> triadic_points(int depth) {
  std::vector<Vector> out;
  double v = 2.0;
  for (int k = 0; k <= depth; ++k) {
    out.push_back(Vector::Constant(1, v));
    v /= 3.0;
  }
  out.push_back(Vector::Zero(1));
  return out;
}

/// Does some point satisfy <a,p> <= b + tol?
inline bool any_in_halfspace(const std::vector<Vector>& points, const Vector& a, double b,
                             double tol) {
  const Vector unit = a / a.norm();
  const double offset = b / a.norm();
  for (const auto& p : points) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) s += unit[i] * p[i];
    if (s - offset <= tol) return true;
  }
  return false;
}

}  // namespace oracle
