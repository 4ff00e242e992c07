#pragma once

// Named, self-contained experiments on small planar and product-space
// instances. Each returns its traces and a list of checks; an experiment
// passes when every fatal check passes.

#include <functional>
#include <string>
#include <vector>

#include "drfeas/engine.hpp"

namespace drfeas::repro {

struct Check {
  std::string name;
  bool passed = false;
  /// Non-fatal checks are reported but do not fail the experiment.
  bool fatal = true;
  std::string detail;
};

struct LabeledTrace {
  std::string label;
  Trace trace;
};

struct ExperimentResult {
  std::string name;
  std::vector<Check> checks;
  std::vector<LabeledTrace> traces;

  bool passed() const;
};

/// Four points against a tilted half-space; solved from (0,3).
ExperimentResult four_points();
/// Alternating projections cycle on a two-point set where DR solves.
ExperimentResult ap_failure();
/// The set {2/3^k} U {0} against {x <= 0}: closed-form iterates, no entry to H.
ExperimentResult triadic();
/// A 4-cycle against the line y = 0.
ExperimentResult hyperplane_cycle();
/// A 2-cycle against a planar cone with the unit-square corners.
ExperimentResult cone_cycle();
/// Non-termination against a slab; the period is reported softly.
ExperimentResult slab_cycle();
/// 2-cycles of the diagonal reformulation in both reflection orders, and of
/// the doubleton {0,1}^2 against the diagonal of the plane.
ExperimentResult product_space_cycles();
/// Unit circle against {y <= b}, b in [-1, 1), from (1,1).
ExperimentResult sphere_halfspace(double b);

struct Experiment {
  std::string name;
  std::string summary;
  std::function<ExperimentResult()> run;
};

const std::vector<Experiment>& experiments();
/// Throws InvalidArgument for an unknown name.
const Experiment& find_experiment(const std::string& name);

}  // namespace drfeas::repro
