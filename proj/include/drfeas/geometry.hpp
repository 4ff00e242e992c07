#pragma once

// Half-spaces, hyperplanes and their closed-form projectors/reflectors.
//
// All types are templated on the scalar and accept arbitrary Eigen
// expressions as query points. Normals are normalized at construction so
// every formula below can assume ||a|| = 1.

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "drfeas/errors.hpp"

namespace drfeas {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Vector = VectorX<double>;

inline void check_dimension(Eigen::Index expected, Eigen::Index actual) {
  if (expected != actual) throw DimensionMismatch(expected, actual);
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& x, const char* what) {
  if (x.size() == 0) throw InvalidArgument(std::string(what) + ": empty vector");
  if (!x.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite coordinate");
}

namespace detail {

// Shared storage for {x : <a,x> (op) b} with ||a|| = 1.
template <typename Scalar>
class NormalForm {
 public:
  template <typename Derived>
  NormalForm(const Eigen::MatrixBase<Derived>& normal, Scalar offset) {
    require_finite(normal, "normal");
    if (!std::isfinite(offset)) throw InvalidArgument("offset: non-finite value");
    const Scalar len = normal.norm();
    if (!(len > Scalar(0))) throw InvalidArgument("normal: zero vector");
    normal_ = normal.template cast<Scalar>() / len;
    offset_ = offset / len;
  }

  const VectorX<Scalar>& normal() const { return normal_; }
  Scalar offset() const { return offset_; }
  Eigen::Index dim() const { return normal_.size(); }

  /// <a,x> - b
  template <typename Derived>
  Scalar residual(const Eigen::MatrixBase<Derived>& x) const {
    check_dimension(dim(), x.size());
    return normal_.dot(x) - offset_;
  }

 protected:
  VectorX<Scalar> normal_;
  Scalar offset_{};
};

}  // namespace detail

/// {x : <a,x> = b}
template <typename Scalar>
class Hyperplane : public detail::NormalForm<Scalar> {
 public:
  using detail::NormalForm<Scalar>::NormalForm;

  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& x, Scalar tol) const {
    return std::abs(this->residual(x)) <= tol;
  }
};

/// {x : <a,x> <= b}
template <typename Scalar>
class HalfSpace : public detail::NormalForm<Scalar> {
 public:
  using detail::NormalForm<Scalar>::NormalForm;

  /// The dividing hyperplane.
  Hyperplane<Scalar> boundary() const { return Hyperplane<Scalar>(this->normal_, this->offset_); }

  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& x, Scalar tol) const {
    return this->residual(x) <= tol;
  }
};

using HalfSpaced = HalfSpace<double>;
using Hyperplaned = Hyperplane<double>;

template <typename Scalar, typename Derived>
Scalar distance(const HalfSpace<Scalar>& h, const Eigen::MatrixBase<Derived>& x) {
  const Scalar r = h.residual(x);
  return r > Scalar(0) ? r : Scalar(0);
}

template <typename Scalar, typename Derived>
Scalar distance(const Hyperplane<Scalar>& l, const Eigen::MatrixBase<Derived>& x) {
  return std::abs(l.residual(x));
}

template <typename Scalar, typename Derived>
VectorX<Scalar> project(const Hyperplane<Scalar>& l, const Eigen::MatrixBase<Derived>& x) {
  const Scalar r = l.residual(x);
  return x - r * l.normal();
}

template <typename Scalar, typename Derived>
VectorX<Scalar> project(const HalfSpace<Scalar>& h, const Eigen::MatrixBase<Derived>& x) {
  const Scalar r = h.residual(x);
  if (r <= Scalar(0)) return x;
  return x - r * h.normal();
}

template <typename Scalar, typename Derived>
VectorX<Scalar> reflect(const Hyperplane<Scalar>& l, const Eigen::MatrixBase<Derived>& x) {
  const Scalar r = l.residual(x);
  return x - Scalar(2) * r * l.normal();
}

template <typename Scalar, typename Derived>
VectorX<Scalar> reflect(const HalfSpace<Scalar>& h, const Eigen::MatrixBase<Derived>& x) {
  const Scalar r = h.residual(x);
  if (r <= Scalar(0)) return x;
  return x - Scalar(2) * r * h.normal();
}

}  // namespace drfeas
