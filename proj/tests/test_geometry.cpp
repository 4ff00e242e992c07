#include <doctest.h>

#include <cmath>

#include "drfeas/geometry.hpp"
#include "test_support.hpp"

using drfeas::HalfSpaced;
using drfeas::Hyperplaned;
using drfeas::Vector;
using test::vec;

namespace {
const double kSqrt13 = std::sqrt(13.0);
}

TEST_CASE("half-space distance") {
  const HalfSpaced h(vec({0, 1}), 0);
  CHECK(drfeas::distance(h, vec({5, -3})) == 0.0);
  CHECK(drfeas::distance(h, vec({0, 1})) == doctest::Approx(1.0).epsilon(1e-15));

  const HalfSpaced tilted(vec({-2, 3}), 0);
  CHECK(drfeas::distance(tilted, vec({0, 2})) == doctest::Approx(6.0 / kSqrt13).epsilon(1e-14));
}

TEST_CASE("hyperplane distance") {
  const Hyperplaned l(vec({0, 1}), 0);
  CHECK(drfeas::distance(l, vec({7, 0})) == 0.0);
  CHECK(drfeas::distance(l, vec({0, -3})) == 3.0);

  const Hyperplaned line(vec({1}), 0);
  CHECK(drfeas::distance(line, vec({1.0 / 3.0})) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("hyperplane projection") {
  const Hyperplaned l(vec({0, 1}), 0);
  CHECK_VEC_NEAR(drfeas::project(l, vec({2, 5})), vec({2, 0}), 0.0);

  const Hyperplaned tilted(vec({-2, 3}), 0);
  CHECK_VEC_NEAR(drfeas::project(tilted, vec({0, 2})), vec({12.0 / 13.0, 8.0 / 13.0}), 1e-15);

  const Vector on_l = vec({3, 2});
  CHECK_VEC_NEAR(drfeas::project(tilted, on_l), on_l, 1e-15);
}

TEST_CASE("half-space projection") {
  const HalfSpaced h(vec({0, 1}), 0);
  CHECK_VEC_NEAR(drfeas::project(h, vec({3, -1})), vec({3, -1}), 0.0);
  CHECK_VEC_NEAR(drfeas::project(h, vec({0, 4})), vec({0, 0}), 0.0);

  const HalfSpaced tilted(vec({-2, 3}), 0);
  CHECK_VEC_NEAR(drfeas::project(tilted, vec({0, 2})), vec({12.0 / 13.0, 8.0 / 13.0}), 1e-15);
}

TEST_CASE("reflections") {
  const HalfSpaced h1(vec({0, 1}), 1);
  CHECK_VEC_NEAR(drfeas::reflect(h1, vec({0, 0.8})), vec({0, 0.8}), 0.0);

  const Hyperplaned l(vec({0, 1}), 0);
  CHECK_VEC_NEAR(drfeas::reflect(l, vec({1, 1})), vec({1, -1}), 0.0);

  const HalfSpaced h0(vec({0, 1}), 0);
  CHECK_VEC_NEAR(drfeas::reflect(h0, vec({0, 2})), vec({0, -2}), 0.0);
}

TEST_CASE("construction normalizes and validates") {
  const HalfSpaced h(vec({3, 4}), 10);
  CHECK(h.normal().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(h.offset() == doctest::Approx(2.0));
  CHECK_VEC_NEAR(h.boundary().normal(), h.normal(), 0.0);

  CHECK_THROWS_AS(HalfSpaced(vec({0, 0}), 1), drfeas::InvalidArgument);
  CHECK_THROWS_AS(Hyperplaned(vec({0, 0, 0}), 0), drfeas::InvalidArgument);
  CHECK_THROWS_AS(HalfSpaced(vec({1, NAN}), 0), drfeas::InvalidArgument);
  CHECK_THROWS_AS(HalfSpaced(vec({1, 0}), INFINITY), drfeas::InvalidArgument);
}

TEST_CASE("dimension mismatch is rejected by every operation") {
  const HalfSpaced h(vec({0, 1}), 0);
  const Hyperplaned l = h.boundary();
  const Vector x = vec({1, 2, 3});
  CHECK_THROWS_AS(drfeas::distance(h, x), drfeas::DimensionMismatch);
  CHECK_THROWS_AS(drfeas::distance(l, x), drfeas::DimensionMismatch);
  CHECK_THROWS_AS(drfeas::project(h, x), drfeas::DimensionMismatch);
  CHECK_THROWS_AS(drfeas::project(l, x), drfeas::DimensionMismatch);
  CHECK_THROWS_AS(drfeas::reflect(h, x), drfeas::DimensionMismatch);
  CHECK_THROWS_AS(drfeas::reflect(l, x), drfeas::DimensionMismatch);
}

TEST_CASE("works on Eigen expressions and other scalars") {
  const drfeas::HalfSpace<float> hf(Eigen::Vector2f(0, 2), 2.0f);
  CHECK(drfeas::distance(hf, Eigen::Vector2f(1, 3)) == doctest::Approx(2.0f));

  const HalfSpaced h(vec({0, 1}), 0);
  const Vector a = vec({1, 1});
  const Vector b = vec({1, 3});
  CHECK_VEC_NEAR(drfeas::project(h, a + b), vec({2, 0}), 0.0);
}

TEST_CASE("projector and reflector properties on random instances") {
  test::Rng rng(20240611);
  for (int trial = 0; trial < 2000; ++trial) {
    const Eigen::Index n = rng.integer(1, 6);
    const Vector a = rng.nonzero(n);
    const double b = rng.uniform(-5, 5);
    const double t = rng.uniform(0.01, 100.0);
    const HalfSpaced h(a, b);
    const HalfSpaced scaled(t * a, t * b);
    const Hyperplaned l = h.boundary();
    const Vector x = rng.point(n);
    CAPTURE(trial);

    // Normalization invariance.
    CHECK(std::abs(drfeas::distance(h, x) - drfeas::distance(scaled, x)) <= 1e-12);
    CHECK(test::max_abs_diff(drfeas::project(h, x), drfeas::project(scaled, x)) <= 1e-12);
    CHECK(test::max_abs_diff(drfeas::reflect(h, x), drfeas::reflect(scaled, x)) <= 1e-12);

    const Vector ph = drfeas::project(h, x);
    const Vector pl = drfeas::project(l, x);
    // Idempotence.
    CHECK(test::max_abs_diff(drfeas::project(h, ph), ph) <= 1e-12);
    CHECK(test::max_abs_diff(drfeas::project(l, pl), pl) <= 1e-12);
    // Containment and distance identity.
    CHECK(drfeas::distance(h, ph) <= 1e-12);
    CHECK(std::abs(l.residual(pl)) <= 1e-12);
    CHECK(std::abs(drfeas::distance(h, x) - (x - ph).norm()) <= 1e-12);
    // x - P_L(x) is parallel to the normal.
    const Vector d = x - pl;
    CHECK((d - d.dot(l.normal()) * l.normal()).norm() <= 1e-12);
    // R = 2P - I, R_L an involution, R_H fixes H.
    CHECK(test::max_abs_diff(drfeas::reflect(h, x), 2.0 * ph - x) <= 1e-12);
    CHECK(test::max_abs_diff(drfeas::reflect(l, drfeas::reflect(l, x)), x) <= 1e-11);
    if (h.residual(x) <= 0) CHECK(drfeas::reflect(h, x) == x);
  }
}
