#include "drfeas/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include "drfeas/dr_step.hpp"
#include "drfeas/engine.hpp"
#include "drfeas/format.hpp"
#include "drfeas/sets.hpp"

namespace drfeas::verify {

StepFn reference_step() {
  return [](const Vector& x, const Vector& q, const HalfSpaced& h) { return dr_step(x, q, h); };
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
  // splitmix64 finalizer over (seed, trial).
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(trial) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

bool PropertyReport::passed() const { return failure_count == 0 && inconclusive * 100 <= trials; }

void PropertyReport::add_failure(Failure f) {
  ++failure_count;
  if (failures.size() < kMaxRecorded) failures.push_back(std::move(f));
}

PropertyReport& PropertyReport::merge(const PropertyReport& other) {
  if (id != other.id || seed != other.seed) throw InvalidArgument("cannot merge reports of different suites");
  trials += other.trials;
  non_vacuous += other.non_vacuous;
  inconclusive += other.inconclusive;
  failure_count += other.failure_count;
  for (const auto& f : other.failures)
    if (failures.size() < kMaxRecorded) failures.push_back(f);
  return *this;
}

namespace {

constexpr double kTol = kTolerance;

struct Gen {
  std::mt19937_64 engine;

  explicit Gen(std::uint64_t seed) : engine(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }

  Vector point(Eigen::Index n, double lo = -5.0, double hi = 5.0) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  Vector unit(Eigen::Index n) {
    std::normal_distribution<double> normal;
    for (;;) {
      Vector v(n);
      for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(engine);
      if (v.norm() > 1e-6) return v.normalized();
    }
  }

  HalfSpaced halfspace(Eigen::Index n) { return HalfSpaced(unit(n), uniform(-3.0, 3.0)); }

  /// A random point with prescribed residual <a,p> - b.
  Vector with_residual(const HalfSpaced& h, double residual) {
    Vector p = point(h.dim());
    return p - (h.residual(p) - residual) * h.normal();
  }

  /// A point of H; on L with probability `boundary`.
  Vector inside(const HalfSpaced& h, double boundary = 0.1) {
    return with_residual(h, chance(boundary) ? 0.0 : -uniform(0.0, 4.0));
  }

  /// `count` points strictly farther from x than q.
  std::vector<Vector> farther(const Vector& x, const Vector& q, int count) {
    std::vector<Vector> out;
    const double r = (q - x).norm();
    for (int i = 0; i < count; ++i)
      out.push_back(x + (r * (1.0 + uniform(0.05, 1.5)) + uniform(0.01, 1.0)) * unit(x.size()));
    return out;
  }
};

double dH(const HalfSpaced& h, const Vector& x) { return std::max(0.0, h.residual(x)); }
double dL(const HalfSpaced& h, const Vector& x) { return std::abs(h.residual(x)); }
bool in_h(const HalfSpaced& h, const Vector& x) { return h.residual(x) <= kTol; }
double gap(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::string describe_points(const std::vector<Vector>& pts) {
  std::string out = "{";
  for (std::size_t i = 0; i < pts.size(); ++i) out += (i ? "," : "") + format_point(pts[i]);
  return out + "}";
}

std::string describe_h(const HalfSpaced& h) {
  return "a=" + format_point(h.normal()) + " b=" + format_real(h.offset());
}

/// Collects the outcome of one trial.
class Trial {
 public:
  Trial(std::size_t index, std::uint64_t seed) : gen(seed), index_(index), seed_(seed) {}

  Gen gen;
  bool non_vacuous = false;
  bool inconclusive = false;
  std::string instance;

  std::size_t index() const { return index_; }

  void expect(bool ok, const std::string& what) {
    if (!ok) problems_.push_back(what);
  }

  void report_into(PropertyReport& report) const {
    ++report.trials;
    if (non_vacuous) ++report.non_vacuous;
    if (inconclusive) ++report.inconclusive;
    if (problems_.empty()) return;
    std::string detail = instance;
    for (const auto& p : problems_) detail += "; " + p;
    report.add_failure({index_, seed_, std::move(detail)});
  }

 private:
  std::size_t index_;
  std::uint64_t seed_;
  std::vector<std::string> problems_;
};

template <typename Body>
PropertyReport run_trials(const std::string& id, const SuiteOptions& opts, Body body) {
  if (opts.min_dim < 1 || opts.max_dim < opts.min_dim) throw InvalidArgument("invalid dimension range");
  PropertyReport report;
  report.id = id;
  report.seed = opts.seed;
  for (std::size_t i = opts.first_trial; i < opts.first_trial + opts.trials; ++i) {
    Trial t(i, trial_seed(opts.seed, i));
    body(t, static_cast<Eigen::Index>(t.gen.integer(opts.min_dim, opts.max_dim)));
    t.report_into(report);
  }
  return report;
}

struct Walk {
  std::vector<Vector> x;
  std::vector<Vector> q;
};

/// x_{k+1} = step(x_k, q_k) with q_k the first nearest point, steps + 1 pairs.
Walk walk(const ProjectableSet& set, const HalfSpaced& h, const Vector& x0, std::size_t steps,
          const StepFn& step) {
  Walk w;
  Vector x = x0;
  for (std::size_t k = 0; k <= steps; ++k) {
    Vector q = set.project_all(x).front();
    w.x.push_back(x);
    w.q.push_back(q);
    if (k < steps) x = step(x, q, h);
    if (!x.allFinite()) break;
  }
  return w;
}

/// Random finite set and half-space for which the walk tends to reach H.
struct FiniteInstance {
  std::vector<Vector> points;
  HalfSpaced h;
  Vector x0;
};

FiniteInstance random_finite(Gen& g, Eigen::Index n) {
  std::vector<Vector> pts;
  const int count = g.integer(2, 8);
  for (int i = 0; i < count; ++i) pts.push_back(g.point(n));
  const Vector a = g.unit(n);
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) lowest = std::min(lowest, a.dot(p));
  const HalfSpaced h(a, lowest + g.uniform(0.1, 4.0));
  return {pts, h, g.point(n)};
}

/// Presents a step function as a half-space constraint for the generic driver.
class StepConstraint final : public ReflectableConstraint {
 public:
  StepConstraint(const HalfSpaced& h, StepFn step) : inner_(h), step_(std::move(step)) {}

  Eigen::Index dim() const override { return inner_.dim(); }
  Vector project(const Vector& x) const override { return inner_.project(x); }
  Vector reflect(const Vector& x) const override { return inner_.reflect(x); }
  double distance(const Vector& x) const override { return inner_.distance(x); }
  bool contains(const Vector& x, double tol) const override { return inner_.contains(x, tol); }
  double boundary_distance(const Vector& x) const override { return inner_.boundary_distance(x); }
  Vector reflect_average(const Vector& x, const Vector& q, double) const override {
    return step_(x, q, inner_.halfspace());
  }
  const HalfSpaced* as_halfspace() const override { return &inner_.halfspace(); }
  std::string describe() const override { return inner_.describe(); }

 private:
  HalfSpaceConstraint inner_;
  StepFn step_;
};

}  // namespace

// ---------------------------------------------------------------------------

PropertyReport check_halfspace_invariance(const SuiteOptions& opts, const StepFn& step) {
  return run_trials("h-invariance", opts, [&](Trial& t, Eigen::Index n) {
    Gen& g = t.gen;
    const HalfSpaced h = g.halfspace(n);
    const Vector x = g.inside(h, 0.15);
    std::vector<Vector> pts;
    const int count = g.integer(1, 8);
    for (int i = 0; i < count; ++i) pts.push_back(g.point(n));
    // A tie through a reflection of the first point about a plane through x.
    if (g.chance(0.2)) {
      const Vector u = g.unit(n);
      const Vector d = pts[0] - x;
      pts.push_back(x + d - 2.0 * d.dot(u) * u);
    }
    const FinitePointSet set(pts);
    t.instance = describe_h(h) + " x=" + format_point(x) + " Q=" + describe_points(set.points());
    const auto ties = set.project_all(x);
    for (const Vector& q : ties) {
      if (h.residual(Vector(2.0 * q - x)) > kTol) t.non_vacuous = true;
      const Vector z = step(x, q, h);
      t.expect(dH(h, z) <= kTol, "DR(x," + format_point(q) + ")=" + format_point(z) + " left H");
    }
  });
}

PropertyReport check_outside_cases(const SuiteOptions& opts, const StepFn& step) {
  return run_trials("outside-cases", opts, [&](Trial& t, Eigen::Index n) {
    Gen& g = t.gen;
    const HalfSpaced h = g.halfspace(n);
    const double dx = g.uniform(0.01, 5.0);
    const Vector x = g.with_residual(h, dx);
    double rq = 0.0;
    switch (g.integer(0, 3)) {
      case 0: rq = g.chance(0.1) ? 0.0 : -g.uniform(0.0, 3.0); break;
      case 1: rq = 0.5 * dx * g.uniform(0.05, 1.0); break;
      case 2: rq = dx * g.uniform(1.0, 3.0); break;
      default: rq = dx * g.uniform(0.51, 0.99); break;
    }
    const Vector q = g.with_residual(h, rq);
    std::vector<Vector> pts{q};
    for (const auto& p : g.farther(x, q, g.integer(0, 6))) pts.push_back(p);
    const FinitePointSet set(pts);
    t.instance = describe_h(h) + " x=" + format_point(x) + " q=" + format_point(q) +
                 " Q=" + describe_points(set.points());
    t.non_vacuous = true;

    const Vector z = step(x, q, h);
    const double dq = dH(h, q);
    if (in_h(h, q)) {
      t.expect(gap(z, q) <= kTol, "q in H but DR(x,q)=" + format_point(z) + " != q");
    } else if (dx >= 2.0 * dq) {
      t.expect(gap(z, q) <= kTol, "d(x,H)>=2d(q,H) but DR(x,q)=" + format_point(z) + " != q");
      for (const Vector& q2 : set.project_all(z)) {
        const Vector z2 = step(z, q2, h);
        t.expect(gap(z2, project(h.boundary(), q)) <= kTol,
                 "second step " + format_point(z2) + " != P_L(q)");
      }
    } else {
      const Vector expected = q + (h.normal().dot(x) + h.offset() - 2.0 * h.normal().dot(q)) * h.normal();
      t.expect(gap(z, expected) <= kTol, "DR(x,q)=" + format_point(z) + " expected " + format_point(expected));
      if (dx <= dq) {
        t.expect(dH(h, z) <= kTol, "d(x,H)<=d(q,H) but DR(x,q) outside H");
      } else {
        t.expect(std::abs(dH(h, z) - (dx - dq)) <= kTol,
                 "d(DR(x,q),H)=" + format_real(dH(h, z)) + " expected " + format_real(dx - dq));
        const auto ties = set.project_all(z);
        const bool q_nearest = std::any_of(ties.begin(), ties.end(), [&](const Vector& p) { return p == q; });
        if (q_nearest) {
          const Vector z2 = step(z, q, h);
          t.expect(dH(h, z2) <= kTol, "DR(DR(x,q),q)=" + format_point(z2) + " outside H");
        }
      }
    }
  });
}

PropertyReport check_inside_step(const SuiteOptions& opts, const StepFn& step) {
  return run_trials("inside-step", opts, [&](Trial& t, Eigen::Index n) {
    Gen& g = t.gen;
    const HalfSpaced h = g.halfspace(n);
    const Vector x = g.inside(h, 0.15);
    const Vector q = g.with_residual(h, g.uniform(0.01, 5.0));
    std::vector<Vector> pts{q};
    for (const auto& p : g.farther(x, q, g.integer(0, 6))) pts.push_back(p);
    t.instance = describe_h(h) + " x=" + format_point(x) + " q=" + format_point(q) +
                 " Q=" + describe_points(pts);
    t.non_vacuous = true;
    const Vector z = step(x, q, h);
    const Vector expected = q - (dL(h, x) + 2.0 * dL(h, q)) * h.normal();
    t.expect(gap(z, expected) <= kTol, "DR(x,q)=" + format_point(z) + " expected " + format_point(expected));
    t.expect(std::abs(dL(h, z) - (dL(h, q) + dL(h, x))) <= kTol,
             "d(DR(x,q),L)=" + format_real(dL(h, z)) + " expected " + format_real(dL(h, q) + dL(h, x)));
  });
}

PropertyReport check_auxiliary_descent(const SuiteOptions& opts, const StepFn& step) {
  return run_trials("aux-descent", opts, [&](Trial& t, Eigen::Index n) {
    Gen& g = t.gen;
    const HalfSpaced h = g.halfspace(n);
    const Vector x = g.inside(h, 0.1);
    const Vector q = g.with_residual(h, g.uniform(0.01, 5.0));
    const double rq = (q - x).norm();
    std::vector<Vector> pts{q};
    for (const auto& p : g.farther(x, q, g.integer(0, 5))) pts.push_back(p);
    const Vector z = step(x, q, h);

    // Plant a point that takes over at z while q stays nearest to x.
    if (g.chance(0.6) && z.allFinite()) {
      const double rz = (z - q).norm();
      for (int attempt = 0; attempt < 20; ++attempt) {
        const Vector p = z + rz * g.uniform(0.05, 0.95) * g.unit(n);
        if ((p - x).norm() > rq + 1e-6 && h.residual(p) > kTol) {
          pts.push_back(p);
          break;
        }
      }
    }
    const FinitePointSet set(pts);
    t.instance = describe_h(h) + " x=" + format_point(x) + " q=" + format_point(q) +
                 " Q=" + describe_points(set.points());
    if (!z.allFinite()) return;
    const double dzQ = set.distance(z);
    for (const Vector& p : set.project_all(z)) {
      if (in_h(h, p) || gap(p, q) <= 1e-12) continue;
      t.non_vacuous = true;
      t.expect(dH(h, p) + (z - q).norm() <= dH(h, q) + dzQ + kTol,
               "inequality fails for p=" + format_point(p));
      t.expect(dH(h, p) < dH(h, q) + kTol, "d(p,H) >= d(q,H) for p=" + format_point(p));
    }
  });
}

PropertyReport check_outside_monotonicity(const SuiteOptions& opts, const StepFn& step) {
  return run_trials("outside-monotone", opts, [&](Trial& t, Eigen::Index n) {
    Gen& g = t.gen;
    const HalfSpaced h = g.halfspace(n);
    std::vector<Vector> pts;
    Vector x0;
    if (t.gen.chance(0.5)) {
      // A geometric ladder of points above L, in the manner of the triadic set.
      const Vector o = g.with_residual(h, 0.0);
      const double s = g.uniform(0.1, 3.0);
      const double ratio = g.uniform(2.2, 4.0);
      const double jitter = g.chance(0.5) ? 0.0 : 1e-3;
      double r = 2.0 * s / ratio;
      for (int k = 0; k < 12; ++k) {
        Vector lateral = jitter * g.unit(n);
        lateral -= lateral.dot(h.normal()) * h.normal();
        pts.push_back(o + r * h.normal() + lateral);
        r /= ratio;
      }
      pts.push_back(o);
      x0 = o + s * h.normal();
    } else {
      const int count = g.integer(2, 8);
      for (int i = 0; i < count; ++i) pts.push_back(g.with_residual(h, g.uniform(-1.0, 4.0)));
      x0 = g.with_residual(h, g.uniform(1.0, 8.0));
    }
    const FinitePointSet set(pts);
    t.instance = describe_h(h) + " x0=" + format_point(x0) + " Q=" + describe_points(set.points());
    const Walk w = walk(set, h, x0, 30, step);
    for (std::size_t k = 0; k + 2 < w.x.size(); ++k) {
      if (in_h(h, w.x[k]) || in_h(h, w.x[k + 1]) || in_h(h, w.x[k + 2])) continue;
      t.non_vacuous = true;
      const double dx = dH(h, w.x[k]);
      const double dq = dH(h, w.q[k]);
      const std::string at = " at k=" + std::to_string(k);
      t.expect(!in_h(h, w.q[k]), "q in H while x stays outside" + at);
      t.expect(dq < dx + kTol, "d(q,H) >= d(x,H)" + at);
      t.expect(dx < 2.0 * dq + kTol, "d(x,H) >= 2 d(q,H)" + at);
      t.expect(std::abs(dH(h, w.x[k + 1]) - (dx - dq)) <= kTol, "d(x_{k+1},H) != d(x,H) - d(q,H)" + at);
      t.expect(dL(h, w.x[k + 1]) < dL(h, w.x[k]), "d(x,L) not decreasing" + at);
    }
  });
}

PropertyReport check_auxiliary_monotonicity(const SuiteOptions& opts, const StepFn& step) {
  return run_trials("aux-monotone", opts, [&](Trial& t, Eigen::Index n) {
    FiniteInstance inst = random_finite(t.gen, n);
    if (t.gen.chance(0.5)) inst.x0 = t.gen.inside(inst.h, 0.1);
    const FinitePointSet set(inst.points);
    const HalfSpaced& h = inst.h;
    t.instance = describe_h(h) + " x0=" + format_point(inst.x0) + " Q=" + describe_points(set.points());
    const Walk w = walk(set, h, inst.x0, 40, step);
    std::size_t k0 = 0;
    while (k0 < w.x.size() && !(in_h(h, w.x[k0]) && in_h(h, w.q[k0]))) ++k0;
    if (k0 + 1 >= w.x.size()) return;
    t.non_vacuous = true;
    for (std::size_t k = k0; k + 1 < w.x.size(); ++k) {
      const std::string at = " at k=" + std::to_string(k);
      t.expect(in_h(h, w.q[k + 1]), "q left H" + at);
      const double gain = dL(h, w.q[k + 1]) - dL(h, w.q[k]);
      t.expect(gain >= -kTol, "d(q,L) decreased" + at);
      if (gap(w.q[k + 1], w.q[k]) > kTol) t.expect(gain > 0.0, "q changed with d(q,L) unchanged" + at);
    }
  });
}

PropertyReport check_eventual_constancy(const SuiteOptions& opts, const StepFn& step) {
  return run_trials("eventual-constancy", opts, [&](Trial& t, Eigen::Index n) {
    FiniteInstance inst = random_finite(t.gen, n);
    if (t.gen.chance(0.5)) inst.x0 = t.gen.inside(inst.h, 0.1);
    const FinitePointSet set(inst.points);
    const HalfSpaced& h = inst.h;
    t.instance = describe_h(h) + " x0=" + format_point(inst.x0) + " Q=" + describe_points(set.points());
    const std::size_t steps = 120;
    const Walk w = walk(set, h, inst.x0, steps, step);
    const std::size_t last = w.x.size() - 1;
    if (!in_h(h, w.q[last])) return;
    // Start of the final stretch with constant q and x in H.
    std::size_t j0 = last;
    while (j0 > 0 && w.q[j0 - 1] == w.q[last] && in_h(h, w.x[j0 - 1])) --j0;
    if (!in_h(h, w.x[j0])) return;
    const Vector& q = w.q[last];
    const double s = h.normal().dot(Vector(2.0 * q - w.x[j0])) - h.offset();
    std::size_t bound = j0 + 1;
    if (s > kTol) {
      if (dL(h, q) <= kTol) return;
      const double extra = std::ceil(s / dL(h, q)) + 2.0;
      if (extra > static_cast<double>(steps)) return;
      bound = j0 + static_cast<std::size_t>(extra);
    }
    if (bound + 1 > last) return;
    t.non_vacuous = true;
    for (std::size_t k = bound; k < last; ++k)
      t.expect(gap(w.x[k + 1], w.x[k]) <= kTol, "x not constant at k=" + std::to_string(k));
  });
}

PropertyReport check_finite_outcomes(const SuiteOptions& opts, const StepFn& step) {
  return run_trials("finite-outcome", opts, [&](Trial& t, Eigen::Index n) {
    Gen& g = t.gen;
    std::unique_ptr<ProjectableSet> set;
    std::vector<Vector> members;  // the brute-force oracle's view of Q
    Vector x0;
    if (t.index() % 2 == 0) {
      const int count = g.integer(1, 8);
      for (int i = 0; i < count; ++i) members.push_back(g.point(n));
      set = std::make_unique<FinitePointSet>(members);
      x0 = g.point(n);
    } else {
      const int m = g.integer(1, 12);
      Vector c(m);
      for (int i = 0; i < m; ++i) c[i] = g.uniform(0.0, 3.0);
      const double lambda = g.uniform(0.0, c.sum());
      for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        Vector y(m);
        for (int i = 0; i < m; ++i) y[i] = (mask >> i) & 1u;
        if (c.dot(y) >= lambda) members.push_back(y);
      }
      set = std::make_unique<BinaryKnapsackSet>(c, lambda);
      x0 = g.point(m, -1.0, 2.0);
    }
    const Eigen::Index dim = set->dim();
    const Vector a = g.unit(dim);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& p : members) {
      lo = std::min(lo, a.dot(p));
      hi = std::max(hi, a.dot(p));
    }
    const HalfSpaced h(a, lo + g.uniform(-0.5, 0.5) * (hi - lo + 1.0));
    const bool feasible = std::any_of(members.begin(), members.end(), [&](const Vector& p) { return in_h(h, p); });

    SolverConfig cfg;
    cfg.max_iter = opts.max_iter;
    const StepConstraint constraint(h, step);
    const RunResult r = run_dr_generic(constraint, *set, x0, cfg);
    t.instance = describe_h(h) + " x0=" + format_point(x0) + " Q=" + set->describe() +
                 " feasible=" + (feasible ? "yes" : "no") + " outcome=" + describe(r.outcome);
    t.non_vacuous = true;

    if (r.is<outcome::Solved>()) {
      const Vector& s = r.as<outcome::Solved>().solution;
      t.expect(feasible, "Solved on an infeasible problem");
      t.expect(in_h(h, s), "solution outside H");
      t.expect(std::any_of(members.begin(), members.end(), [&](const Vector& p) { return gap(p, s) <= 1e-12; }),
               "solution not in Q");
    } else if (r.is<outcome::Diverging>()) {
      t.expect(!feasible, "Diverging on a feasible problem");
      const auto& cert = r.as<outcome::Diverging>().certificate;
      t.expect(std::abs(cert.increment - dL(h, cert.q_fixed)) <= kTol && cert.increment > kTol,
               "certificate increment is not d(q,L)");
      for (std::size_t j = cert.start_index; j + 1 < r.trace.size(); ++j) {
        if (!(r.trace[j].q == cert.q_fixed) ||
            gap(r.trace[j + 1].x - r.trace[j].x, Vector(-cert.increment * h.normal())) > kTol) {
          t.expect(false, "certificate pattern broken at k=" + std::to_string(j));
          break;
        }
      }
    } else if (r.is<outcome::MaxIterations>()) {
      t.inconclusive = true;
    } else {
      t.expect(false, "unexpected outcome");
    }
  });
}

// ---------------------------------------------------------------------------

namespace mutants {

Vector flipped_case(const Vector& x, const Vector& q, const HalfSpaced& h) {
  const double ax = h.normal().dot(x);
  const double aq = h.normal().dot(q);
  if (2.0 * aq - ax <= h.offset() + kMembershipTolerance) return q + (ax + h.offset() - 2.0 * aq) * h.normal();
  return q;
}

Vector no_factor_two(const Vector& x, const Vector& q, const HalfSpaced& h) {
  const double ax = h.normal().dot(x);
  const double aq = h.normal().dot(q);
  if (2.0 * aq - ax <= h.offset() + kMembershipTolerance) return q;
  return q + (ax + h.offset() - aq) * h.normal();
}

Vector sign_flip(const Vector& x, const Vector& q, const HalfSpaced& h) {
  const double ax = h.normal().dot(x);
  const double aq = h.normal().dot(q);
  if (2.0 * aq - ax <= h.offset() + kMembershipTolerance) return q;
  return q - (ax + h.offset() - 2.0 * aq) * h.normal();
}

Vector damped_first_branch(const Vector& x, const Vector& q, const HalfSpaced& h) {
  const double ax = h.normal().dot(x);
  const double aq = h.normal().dot(q);
  if (2.0 * aq - ax <= h.offset() + kMembershipTolerance) return 0.5 * (x + q);
  return q + (ax + h.offset() - 2.0 * aq) * h.normal();
}

}  // namespace mutants

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {"h-invariance", check_halfspace_invariance, "flipped-case", mutants::flipped_case},
      {"outside-cases", check_outside_cases, "flipped-case", mutants::flipped_case},
      {"inside-step", check_inside_step, "no-factor-two", mutants::no_factor_two},
      {"aux-descent", check_auxiliary_descent, "sign-flip", mutants::sign_flip},
      {"outside-monotone", check_outside_monotonicity, "no-factor-two", mutants::no_factor_two},
      {"aux-monotone", check_auxiliary_monotonicity, "flipped-case", mutants::flipped_case},
      {"eventual-constancy", check_eventual_constancy, "damped-first-branch", mutants::damped_first_branch},
      {"finite-outcome", check_finite_outcomes, "flipped-case", mutants::flipped_case},
  };
  return all;
}

const Suite& find_suite(const std::string& id) {
  for (const auto& s : suites())
    if (s.id == id) return s;
  throw InvalidArgument("unknown property suite '" + id + "'");
}

}  // namespace drfeas::verify
