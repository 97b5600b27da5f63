#pragma once

#include "redopt/problem.hpp"

namespace redopt {

enum class SnakeboardSymmetry { R2, R2xSO2 };

/// Kinematic snakeboard on (x1, x2, theta, psi, phi) with wheelbase r and
/// identity cost metric.  The R2 symmetry translates (x1, x2); R2xSO2 also
/// rotates psi.  broken_action deliberately translates theta as well, as a
/// negative control for the verification suite.
ProblemDefinition build_snakeboard(double r, SnakeboardSymmetry symmetry,
                                   bool broken_action = false);

/// Left-invariant control system on the rotation group in exponential
/// coordinates with cost sum_i I_i u_i^2 / 2 over the actuated axes.
ProblemDefinition build_rigid_body(double i1, double i2, double i3,
                                   const std::vector<int>& actuated = {1, 2, 3});

/// Contact-distribution system on R^3 with vertical translation symmetry.
ProblemDefinition build_heisenberg();

}  // namespace redopt
