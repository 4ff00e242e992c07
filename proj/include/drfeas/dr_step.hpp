#pragma once

#include "drfeas/geometry.hpp"

namespace drfeas {

/// Default absolute tolerance for half-space membership tests.
inline constexpr double kMembershipTolerance = 1e-9;

/// One Douglas-Rachford update for a half-space H and a selected projection
/// q in P_Q(x), in the case-split form
///
///   DR(x,q) = q                               if <a,2q-x> <= b,
///             q + (<a,x> + b - 2<a,q>) a      otherwise.
///
/// The first branch is taken when <a,2q-x> <= b + tol. q is not checked to
/// be a nearest point of x.
template <typename Scalar, typename DerivedX, typename DerivedQ>
VectorX<Scalar> dr_step(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedQ>& q,
                        const HalfSpace<Scalar>& h, Scalar tol = Scalar(kMembershipTolerance)) {
  check_dimension(h.dim(), x.size());
  check_dimension(h.dim(), q.size());
  const Scalar ax = h.normal().dot(x);
  const Scalar aq = h.normal().dot(q);
  const Scalar b = h.offset();
  if (Scalar(2) * aq - ax <= b + tol) return q;
  return q + (ax + b - Scalar(2) * aq) * h.normal();
}

}  // namespace drfeas
