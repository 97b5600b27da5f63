#pragma once

#include <map>
#include <string>

#include "redopt/control.hpp"

namespace redopt {

/// A fully specified optimal control problem with symmetry: the affine
/// system, its cost, the group action with trivialization split, sampling
/// boxes for statistical checks, and default initial data for the CLI.
struct ProblemDefinition {
  std::string name;
  AffineControlSystem sys;
  Cost cost;
  SymmetrySpec sym;

  Vec sample_lo, sample_hi;  // state box for Halton sampling
  Vec group_lo, group_hi;    // group-element box
  double control_scale = 1.0;

  Vec default_state, default_costate;
  std::map<std::string, double> params;

  // Closed-form connection data, when the problem has one; used by the
  // verification command and the test oracles.
  std::function<Mat(const Vec& xbar)> known_connection;                // k x s
  std::function<std::vector<Mat>(const Vec& xbar)> known_curvature;    // k of s x s

  int m() const { return sys.m; }
  int d() const { return sys.d; }
  int k() const { return sym.group.k; }
  int s() const { return sym.action.s(); }
};

/// Structural checks: group axioms, action axioms on Halton samples
/// (identity, composition to 1e-10, freeness, shape invariance), field
/// independence, metric positivity, dimension bookkeeping, and the symmetry
/// residuals at the given tolerance.  Throws on the first violation.
void validate_problem(const ProblemDefinition& p, int samples = 100, double tol = 1e-6);

/// Halton (x, u, g) triples drawn from the problem's sampling boxes.
std::vector<std::array<Vec, 3>> symmetry_samples(const ProblemDefinition& p, int n);

/// Convenience: verify_symmetry on Halton samples.
SymmetryReport verify_problem_symmetry(const ProblemDefinition& p, int n = 100);

}  // namespace redopt
