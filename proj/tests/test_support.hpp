#pragma once

#include <doctest.h>

#include <initializer_list>
#include <random>

#include "drfeas/format.hpp"
#include "drfeas/geometry.hpp"

namespace test {

inline drfeas::Vector vec(std::initializer_list<double> values) {
  drfeas::Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double d : values) v[i++] = d;
  return v;
}

inline double max_abs_diff(const drfeas::Vector& a, const drfeas::Vector& b) {
  REQUIRE(a.size() == b.size());
  return (a - b).cwiseAbs().maxCoeff();
}

#define CHECK_VEC_NEAR(actual, expected, tol)                                               \
  do {                                                                                       \
    const drfeas::Vector actual_ = (actual);                                                 \
    const drfeas::Vector expected_ = (expected);                                             \
    INFO("actual=" << drfeas::format_point(actual_) << " expected=" << drfeas::format_point(expected_)); \
    CHECK(test::max_abs_diff(actual_, expected_) <= (tol));                                  \
  } while (0)

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }

  drfeas::Vector point(Eigen::Index n, double lo = -10.0, double hi = 10.0) {
    drfeas::Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  drfeas::Vector nonzero(Eigen::Index n) {
    for (;;) {
      drfeas::Vector v = point(n, -1.0, 1.0);
      if (v.norm() > 1e-3) return v;
    }
  }
};

}  // namespace test
