#include <doctest.h>

#include <cmath>
#include <memory>

#include "drfeas/engine.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace drfeas;
using test::vec;

namespace {

const HalfSpaced kFig1H(vec({-2, 3}), 0);

FinitePointSet fig1_set() {
  return FinitePointSet({vec({-2, -2}), vec({-1, 0}), vec({1, 1.5}), vec({-1.2, 2})});
}

struct Instance {
  std::vector<Vector> points;
  HalfSpaced h;
  Vector x0;
};

Instance random_instance(test::Rng& rng, bool force_infeasible = false) {
  const Eigen::Index n = rng.integer(1, 5);
  std::vector<Vector> pts;
  const int count = rng.integer(1, 8);
  for (int i = 0; i < count; ++i) pts.push_back(rng.point(n));
  const Vector a = rng.nonzero(n);
  const Vector unit = a.normalized();
  double b = rng.uniform(-10, 10);
  if (force_infeasible) {
    double lowest = unit.dot(pts[0]);
    for (const auto& p : pts) lowest = std::min(lowest, unit.dot(p));
    b = lowest - rng.uniform(0.1, 3);
  }
  return {pts, HalfSpaced(unit, b), rng.point(n)};
}

double d_H(const HalfSpaced& h, const Vector& x) { return std::max(0.0, h.residual(x)); }
double d_L(const HalfSpaced& h, const Vector& x) { return std::abs(h.residual(x)); }

}  // namespace

TEST_CASE("dr_step examples") {
  CHECK_VEC_NEAR(dr_step(vec({0, 3}), vec({-1.2, 2}), kFig1H), vec({0, 0.2}), 1e-12);

  const HalfSpaced line(vec({1}), 0);
  CHECK_VEC_NEAR(dr_step(vec({1}), vec({2.0 / 3.0}), line), vec({1.0 / 3.0}), 1e-15);

  const Vector q = vec({-1, -4});
  CHECK_VEC_NEAR(dr_step(q, q, kFig1H), q, 0.0);
  CHECK_THROWS_AS(dr_step(vec({1, 2, 3}), vec({1, 2, 3}), kFig1H), DimensionMismatch);
}

TEST_CASE("dr_step agrees with the reflector composition") {
  test::Rng rng(31);
  for (int trial = 0; trial < 5000; ++trial) {
    const Eigen::Index n = rng.integer(1, 6);
    const HalfSpaced h(rng.nonzero(n), rng.uniform(-5, 5));
    const Vector x = rng.point(n);
    const Vector q = rng.point(n);
    const Vector reference = 0.5 * (x + reflect(h, Vector(2.0 * q - x)));
    CHECK(test::max_abs_diff(dr_step(x, q, h), reference) <= 1e-12 * (1.0 + x.norm() + q.norm()));
  }
}

TEST_CASE("dr_step_generic examples") {
  SUBCASE("diagonal first on the product space") {
    const DiagonalSet d(2);
    auto h = std::make_shared<HalfSpaceConstraint>(HalfSpaced(vec({0, 1}), 1));
    auto corners = std::make_shared<FinitePointSet>(
        std::vector<Vector>{vec({0, 0}), vec({0, 1}), vec({1, 0}), vec({1, 1})});
    const ProductSet c({std::make_shared<ConstraintSet>(h), corners});
    SolverConfig cfg;
    cfg.reflect_order = ReflectOrder::constraint_first;
    const auto step = dr_step_generic(vec({0, 0.4, 0, 0.8}), d, c, cfg);
    CHECK_VEC_NEAR(step.next, vec({0, 0.6, 0, 0.2}), 1e-12);
  }
  SUBCASE("hyperplane constraint") {
    const HyperplaneConstraint l(Hyperplaned(vec({0, 1}), 0));
    const FinitePointSet q({vec({0, 1}), vec({1, -1})});
    const auto step = dr_step_generic(vec({0, 0}), l, q, SolverConfig{});
    CHECK_VEC_NEAR(step.next, vec({0, -1}), 0.0);
    CHECK_VEC_NEAR(step.q, vec({0, 1}), 0.0);
  }
  SUBCASE("consistent point is fixed") {
    const HyperplaneConstraint l(Hyperplaned(vec({0, 1}), 0));
    const FinitePointSet q({vec({2, 0}), vec({1, -1})});
    CHECK_VEC_NEAR(dr_step_generic(vec({2, 0}), l, q, SolverConfig{}).next, vec({2, 0}), 0.0);
  }
  SUBCASE("degenerate projections propagate") {
    const HalfSpaceConstraint h(HalfSpaced(vec({0, 1}), 0));
    const Sphere s(vec({0, 0}), 1);
    CHECK_THROWS_AS(dr_step_generic(vec({0, 0}), h, s, SolverConfig{}), DegenerateProjection);
  }
}

TEST_CASE("run_dr examples") {
  SUBCASE("four points") {
    const auto r = run_dr(fig1_set(), kFig1H, vec({0, 3}));
    REQUIRE(r.is<outcome::Solved>());
    CHECK_VEC_NEAR(r.as<outcome::Solved>().solution, vec({-2, -2}), 0.0);
    CHECK(r.as<outcome::Solved>().iterations <= 8);
    CHECK_VEC_NEAR(r.trace[1].x, vec({0, 0.2}), 1e-9);
  }
  SUBCASE("single infeasible point") {
    const FinitePointSet q({vec({0, 1})});
    const auto r = run_dr(q, HalfSpaced(vec({0, 1}), 0), vec({0, 1}));
    REQUIRE(r.is<outcome::Diverging>());
    const auto& cert = r.as<outcome::Diverging>().certificate;
    CHECK(cert.increment == 1.0);
    CHECK(cert.start_index == 1);
    CHECK_VEC_NEAR(cert.q_fixed, vec({0, 1}), 0.0);
    for (std::size_t k = 1; k < r.trace.size(); ++k)
      CHECK_VEC_NEAR(r.trace[k].x, vec({0, 1.0 - static_cast<double>(k)}), 1e-12);
    CHECK(r.as<outcome::Diverging>().beta_estimate == 1.0);
  }
  SUBCASE("triadic set never enters H") {
    SolverConfig cfg;
    cfg.max_iter = 15;
    const auto r = run_dr(TriadicSet(), HalfSpaced(vec({1}), 0), vec({1}), cfg);
    REQUIRE(r.is<outcome::MaxIterations>());
    CHECK_FALSE(r.as<outcome::MaxIterations>().norm_limit_hit);
    REQUIRE(r.trace.size() == 16);
    for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k].d_qH < r.trace[k - 1].d_qH);
  }
  SUBCASE("start in Q and H") {
    const auto r = run_dr(fig1_set(), kFig1H, vec({-2, -2}));
    REQUIRE(r.is<outcome::Solved>());
    CHECK(r.as<outcome::Solved>().iterations == 0);
  }
  SUBCASE("degenerate projection is an outcome") {
    const auto r = run_dr(Sphere(vec({0, 0}), 1), HalfSpaced(vec({0, 1}), 0), vec({0, 0}));
    REQUIRE(r.is<outcome::DegenerateProjection>());
    CHECK(r.as<outcome::DegenerateProjection>().index == 0);
    CHECK(r.trace.size() == 0);
  }
  SUBCASE("norm fallback") {
    SolverConfig cfg;
    cfg.norm_limit = 5;
    cfg.divergence_window = 100;
    const auto r = run_dr(FinitePointSet({vec({0, 1})}), HalfSpaced(vec({0, 1}), 0), vec({0, 1}), cfg);
    REQUIRE(r.is<outcome::MaxIterations>());
    CHECK(r.as<outcome::MaxIterations>().norm_limit_hit);
    CHECK(r.trace.size() < 10);
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(run_dr(fig1_set(), kFig1H, vec({0, 3, 1})), DimensionMismatch);
    CHECK_THROWS_AS(run_dr(fig1_set(), kFig1H, vec({0, NAN})), InvalidArgument);
    SolverConfig cfg;
    cfg.max_iter = 0;
    CHECK_THROWS_AS(run_dr(fig1_set(), kFig1H, vec({0, 3}), cfg), InvalidArgument);
    cfg = {};
    cfg.cycle_tol = 0;
    CHECK_THROWS_AS(run_dr(fig1_set(), kFig1H, vec({0, 3}), cfg), InvalidArgument);
  }
}

TEST_CASE("max_iter bounds the recorded iterates") {
  SolverConfig cfg;
  cfg.max_iter = 3;
  cfg.divergence_window = 50;
  const auto r = run_dr(FinitePointSet({vec({0, 1})}), HalfSpaced(vec({0, 1}), 0), vec({0, 1}), cfg);
  REQUIRE(r.is<outcome::MaxIterations>());
  CHECK(r.trace.size() == 4);
  CHECK(r.as<outcome::MaxIterations>().final_d_qH == 1.0);
}

TEST_CASE("run_dr_generic examples") {
  SUBCASE("hyperplane 4-cycle") {
    const HyperplaneConstraint l(Hyperplaned(vec({0, 1}), 0));
    const FinitePointSet q({vec({0, 1}), vec({1, -1})});
    const auto r = run_dr_generic(l, q, vec({-1, 1}));
    REQUIRE(r.is<outcome::Cycle>());
    CHECK(r.as<outcome::Cycle>().period == 4);
    CHECK(r.as<outcome::Cycle>().first_index == 1);
    const std::vector<Vector> orbit = {vec({0, 0}), vec({0, -1}), vec({1, 0}), vec({1, 1}), vec({0, 0})};
    REQUIRE(r.trace.size() == 6);
    for (std::size_t k = 0; k < orbit.size(); ++k) CHECK_VEC_NEAR(r.trace[k + 1].x, orbit[k], 1e-12);
    const auto c = detect_cycle(r.trace, 1e-9);
    REQUIRE(c);
    CHECK(c->period == 4);
    CHECK(c->first_index == 1);
  }
  SUBCASE("product-space 2-cycle") {
    const DiagonalSet d(2);
    auto h = std::make_shared<HalfSpaceConstraint>(HalfSpaced(vec({0, 1}), 1));
    auto corners = std::make_shared<FinitePointSet>(
        std::vector<Vector>{vec({0, 0}), vec({0, 1}), vec({1, 0}), vec({1, 1})});
    const ProductSet c({std::make_shared<ConstraintSet>(h), corners});
    SolverConfig cfg;
    cfg.reflect_order = ReflectOrder::constraint_first;
    const auto r = run_dr_generic(d, c, vec({0, 0.4, 0, 0.8}), cfg);
    REQUIRE(r.is<outcome::Cycle>());
    CHECK(r.as<outcome::Cycle>().period == 2);
    CHECK(r.as<outcome::Cycle>().first_index == 0);
  }
  SUBCASE("solved requires the selected point in the constraint") {
    const HyperplaneConstraint l(Hyperplaned(vec({0, 1}), 0));
    const FinitePointSet q({vec({0, 1}), vec({3, 0})});
    const auto r = run_dr_generic(l, q, vec({3, 0.1}));
    REQUIRE(r.is<outcome::Solved>());
    CHECK_VEC_NEAR(r.as<outcome::Solved>().solution, vec({3, 0}), 0.0);
  }
}

TEST_CASE("generic and specialized half-space runs agree bit for bit") {
  test::Rng rng(77);
  for (int trial = 0; trial < 400; ++trial) {
    CAPTURE(trial);
    const Instance inst = random_instance(rng, trial % 3 == 0);
    const FinitePointSet q(inst.points);
    SolverConfig cfg;
    cfg.max_iter = 300;
    cfg.tie_rule = static_cast<TieRule>(trial % 3);
    cfg.seed = static_cast<std::uint64_t>(trial);
    const auto specialized = run_dr(q, inst.h, inst.x0, cfg);
    const auto generic = run_dr_generic(HalfSpaceConstraint(inst.h), q, inst.x0, cfg);
    REQUIRE(specialized.trace.size() == generic.trace.size());
    CHECK(outcome_name(specialized.outcome) == outcome_name(generic.outcome));
    CHECK(specialized.trace.fingerprint == generic.trace.fingerprint);
    for (std::size_t k = 0; k < specialized.trace.size(); ++k) {
      CHECK(specialized.trace[k].x == generic.trace[k].x);
      CHECK(specialized.trace[k].q == generic.trace[k].q);
    }
  }
}

TEST_CASE("alternating projections") {
  const FinitePointSet q({vec({0, 2}), vec({1, -2})});
  SUBCASE("cycles where DR solves") {
    const auto ap = run_ap(q, kFig1H, vec({-2, 2}));
    REQUIRE(ap.is<outcome::Cycle>());
    CHECK(ap.as<outcome::Cycle>().period == 2);
    CHECK(ap.as<outcome::Cycle>().first_index == 1);
    CHECK_VEC_NEAR(ap.trace[0].q, vec({0, 2}), 0.0);
    CHECK_VEC_NEAR(ap.trace[1].x, vec({12.0 / 13.0, 8.0 / 13.0}), 1e-9);
    CHECK_VEC_NEAR(ap.trace[1].q, vec({0, 2}), 0.0);

    const auto dr = run_dr(q, kFig1H, vec({-2, 2}));
    REQUIRE(dr.is<outcome::Solved>());
    CHECK_VEC_NEAR(dr.as<outcome::Solved>().solution, vec({1, -2}), 0.0);
  }
  SUBCASE("recurrence is matched within a role") {
    // x0 = q0 is not a cycle: the orbit is (0,1) -> (0,0) -> (0,1) -> ...
    const FinitePointSet single({vec({0, 1})});
    const auto ap = run_ap(single, HalfSpaced(vec({0, 1}), 0), vec({0, 1}));
    REQUIRE(ap.is<outcome::Cycle>());
    CHECK(ap.as<outcome::Cycle>().period == 2);
    CHECK(ap.as<outcome::Cycle>().first_index == 1);
  }
  SUBCASE("starting at a solution") {
    const auto ap = run_ap(q, kFig1H, vec({1, -2}));
    REQUIRE(ap.is<outcome::Solved>());
    CHECK(ap.as<outcome::Solved>().iterations == 0);
  }
}

TEST_CASE("cycle detector") {
  CHECK_FALSE(detect_cycle(std::vector<Vector>{}, 1e-9));
  const auto constant = detect_cycle({vec({1, 2}), vec({1, 2}), vec({1, 2})}, 1e-9);
  REQUIRE(constant);
  CHECK(constant->period == 1);
  CHECK(constant->first_index == 0);

  // Signed zeros and sub-grid noise quantize to the same state.
  const auto noisy = detect_cycle({vec({0.0, 1}), vec({5, 5}), vec({-0.0, 1 + 1e-13})}, 1e-9);
  REQUIRE(noisy);
  CHECK(noisy->period == 2);

  CHECK_FALSE(detect_cycle({vec({0}), vec({1}), vec({2})}, 1e-9));

  const auto fig1 = run_dr(fig1_set(), kFig1H, vec({0, 3}));
  CHECK_FALSE(detect_cycle(fig1.trace, 1e-9));
}

TEST_CASE("linear divergence detector") {
  const HalfSpaced h(vec({0, 1}), 0);
  const auto diverging = dr_sequence(FinitePointSet({vec({0, 1})}), h, vec({0, 1}), 40);
  const auto cert = detect_linear_divergence(diverging, h, 25, 1e-9);
  REQUIRE(cert);
  CHECK(cert->increment == 1.0);
  CHECK(cert->start_index == 1);
  REQUIRE(cert->cumulative_offset.size() == 39);
  // lambda_j = d(x_1, L) + (j - k1 + 2) d(q, L) with d(x_1, L) = 0.
  for (std::size_t i = 0; i < cert->cumulative_offset.size(); ++i)
    CHECK(cert->cumulative_offset[i] == doctest::Approx(static_cast<double>(i) + 2.0));

  CHECK_FALSE(detect_linear_divergence(diverging, h, 45, 1e-9));

  const auto fig1 = run_dr(fig1_set(), kFig1H, vec({0, 3}));
  CHECK_FALSE(detect_linear_divergence(fig1.trace, kFig1H, 25, 1e-9));

  const HalfSpaced line(vec({1}), 0);
  const auto triadic = dr_sequence(TriadicSet(), line, vec({1}), 40);
  CHECK_FALSE(detect_linear_divergence(triadic, line, 25, 1e-9));
  CHECK_FALSE(detect_linear_divergence(triadic, line, 5, 1e-9));

  SUBCASE("a later switch to a point nearer H vetoes the window") {
    // (10, 0.5) becomes nearest once the ray passes y = -99.25.
    const FinitePointSet q({vec({0, 1}), vec({10, 0.5})});
    const auto early = dr_sequence(q, h, vec({0, 1}), 40);
    CHECK(detect_linear_divergence(early, h, 25, 1e-9));
    CHECK_FALSE(detect_linear_divergence(early, h, 25, 1e-9, 1e-9, &q));
    const auto r = run_dr(q, h, vec({0, 1}));
    REQUIRE(r.is<outcome::Diverging>());
    CHECK_VEC_NEAR(r.as<outcome::Diverging>().certificate.q_fixed, vec({10, 0.5}), 0.0);
    CHECK(r.as<outcome::Diverging>().certificate.increment == doctest::Approx(0.5));
    CHECK(r.as<outcome::Diverging>().beta_estimate == doctest::Approx(0.5));
  }
}

TEST_CASE("tie rules") {
  const FinitePointSet pair({vec({1}), vec({-1})});
  TieSelector first(SolverConfig{});
  CHECK(first.pick(2, 5) == 0);
  SolverConfig rot;
  rot.tie_rule = TieRule::rotate;
  TieSelector rotate(rot);
  CHECK(rotate.pick(3, 0) == 0);
  CHECK(rotate.pick(3, 4) == 1);
  CHECK(rotate.pick(1, 4) == 0);

  SolverConfig rnd;
  rnd.tie_rule = TieRule::random;
  rnd.seed = 9;
  TieSelector a(rnd), b(rnd);
  for (std::size_t k = 0; k < 50; ++k) {
    const auto pa = a.pick(4, k);
    CHECK(pa == b.pick(4, k));
    CHECK(pa < 4);
  }

  CHECK(parse_tie_rule("rotate") == TieRule::rotate);
  CHECK(parse_reflect_order("constraint-first") == ReflectOrder::constraint_first);
  CHECK(to_string(ReflectOrder::set_first) == "set-first");
  CHECK_THROWS_AS(parse_tie_rule("last"), InvalidArgument);
  CHECK_THROWS_AS(parse_reflect_order("both"), InvalidArgument);

  // The tie at x0 = 0 sends the run to a different nearest point.
  const HalfSpaced h(vec({1}), -0.5);
  SolverConfig cfg;
  cfg.tie_rule = TieRule::first;
  const auto r_first = run_dr(pair, h, vec({0}), cfg);
  CHECK_VEC_NEAR(r_first.trace[0].q, vec({1}), 0.0);
  cfg.tie_rule = TieRule::rotate;
  const auto r_rot = run_dr(pair, h, vec({0}), cfg);
  CHECK_VEC_NEAR(r_rot.trace[0].q, vec({1}), 0.0);
  REQUIRE(r_rot.is<outcome::Solved>());
}

TEST_CASE("runs are deterministic and fingerprinted") {
  test::Rng rng(3);
  const Instance inst = random_instance(rng);
  SolverConfig cfg;
  cfg.tie_rule = TieRule::random;
  cfg.seed = 11;
  const FinitePointSet q(inst.points);
  const auto r1 = run_dr(q, inst.h, inst.x0, cfg);
  const auto r2 = run_dr(q, inst.h, inst.x0, cfg);
  REQUIRE(r1.trace.size() == r2.trace.size());
  for (std::size_t k = 0; k < r1.trace.size(); ++k) CHECK(r1.trace[k].x == r2.trace[k].x);
  CHECK(r1.trace.fingerprint == r2.trace.fingerprint);
  cfg.seed = 12;
  CHECK(run_dr(q, inst.h, inst.x0, cfg).trace.fingerprint != r1.trace.fingerprint);
}

TEST_CASE("trace invariants on random runs") {
  test::Rng rng(2024);
  int divergent = 0;
  int entered = 0;
  int with_lemma48 = 0;
  for (int trial = 0; trial < 600; ++trial) {
    CAPTURE(trial);
    const Instance inst = random_instance(rng, trial % 2 == 0);
    const FinitePointSet q(inst.points);
    const HalfSpaced& h = inst.h;
    const double eps = 1e-9;
    SolverConfig cfg;
    cfg.max_iter = 2000;
    const auto r = run_dr(q, h, inst.x0, cfg);
    const Trace& t = r.trace;

    for (std::size_t k = 0; k < t.size(); ++k) {
      const auto& rec = t[k];
      CHECK(rec.k == k);
      CHECK(std::abs(rec.d_xH - d_H(h, rec.x)) <= 1e-12 * (1 + rec.x.norm()));
      CHECK(std::abs(rec.d_qH - d_H(h, rec.q)) <= 1e-12 * (1 + rec.q.norm()));
      CHECK(std::abs(rec.d_xL - d_L(h, rec.x)) <= 1e-12 * (1 + rec.x.norm()));
      CHECK(std::abs(rec.d_qL - d_L(h, rec.q)) <= 1e-12 * (1 + rec.q.norm()));
      // q_k is a nearest point of x_k.
      CHECK(std::abs((rec.x - rec.q).norm() - q.distance(rec.x)) <= 1e-9);
    }

    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
      const auto& cur = t[k];
      const auto& nxt = t[k + 1];
      // H-invariance.
      if (cur.d_xH <= eps) {
        CHECK(nxt.d_xH <= eps);
        ++entered;
      }
      // Step identity inside H with q outside H.
      if (cur.d_xH <= eps && cur.d_qH > eps) {
        const Vector expected = cur.q - (cur.d_xL + 2.0 * cur.d_qL) * h.normal();
        CHECK(test::max_abs_diff(nxt.x, expected) <= 1e-9);
        CHECK(std::abs(nxt.d_xL - (cur.d_qL + cur.d_xL)) <= 1e-9);
      }
      // Outside H for three consecutive iterates.
      if (k + 2 < t.size() && cur.d_xH > eps && nxt.d_xH > eps && t[k + 2].d_xH > eps) {
        CHECK(cur.d_qH < cur.d_xH + 1e-9);
        CHECK(cur.d_xH < 2.0 * cur.d_qH + 1e-9);
        CHECK(nxt.d_xL < cur.d_xL + 1e-12);
      }
    }

    if (r.is<outcome::Solved>()) {
      const Vector& s = r.as<outcome::Solved>().solution;
      CHECK(q.contains(s, 1e-12));
      CHECK(d_H(h, s) <= eps);
      CHECK(oracle::any_in_halfspace(inst.points, h.normal(), h.offset(), eps));
    }
    if (r.is<outcome::Diverging>()) {
      ++divergent;
      CHECK_FALSE(oracle::any_in_halfspace(inst.points, h.normal(), h.offset(), eps));
      const auto& cert = r.as<outcome::Diverging>().certificate;
      const std::size_t k1 = cert.start_index;
      for (std::size_t k = k1; k + 1 < t.size(); ++k) {
        CHECK(test::max_abs_diff(t[k + 1].x - t[k].x, -cert.increment * h.normal()) <= 1e-9);
        CHECK(t[k].q == cert.q_fixed);
      }
      // Linear rate on the continued raw sequence.
      const Trace longer = dr_sequence(q, h, inst.x0, t.size() + 200);
      for (std::size_t k = k1; k + 1 < longer.size(); ++k) {
        CHECK(longer[k + 1].x.norm() >=
              static_cast<double>(k - k1) * cert.increment - cert.q_fixed.norm() - 1e-9);
      }
    }

    // Once x and q are both in H, q stays in H and drifts away from L.
    const Trace raw = dr_sequence(q, h, inst.x0, 60);
    bool inside = false;
    for (std::size_t k = 0; k + 1 < raw.size(); ++k) {
      if (!inside && raw[k].d_xH <= eps && raw[k].d_qH <= eps) {
        inside = true;
        ++with_lemma48;
      }
      if (!inside) continue;
      CHECK(raw[k + 1].d_qH <= eps);
      const double gain = raw[k + 1].d_qL - raw[k].d_qL;
      CHECK(gain >= -1e-12);
      if (test::max_abs_diff(raw[k + 1].q, raw[k].q) > 1e-12) CHECK(gain > 0.0);
    }
  }
  CHECK(divergent > 50);
  CHECK(entered > 100);
  CHECK(with_lemma48 > 50);
}
