#pragma once

#include "redopt/reduction.hpp"

namespace redopt {

/// Fixed-endpoint problem solved by single shooting.  The guess is always a
/// full initial costate; reduced shooting derives its unknowns from it.
struct ShootingProblem {
  const ProblemDefinition* problem = nullptr;
  Vec x0, x1;
  double t0 = 0.0, t1 = 1.0;
  double h = 1e-3;
  Vec guess;
  double newton_tol = 1e-10;
  int max_iterations = 100;
  double fd_step = 1e-6;
};

enum class ShootStatus { Converged, MaxIterations, SingularJacobian, BlowUp };

struct ShootingResult {
  bool converged = false;
  ShootStatus status = ShootStatus::MaxIterations;
  std::string message;
  int iterations = 0;
  std::vector<double> residual_history;
  Vec unknowns;
  double endpoint_residual = 0;
  double cost = 0;
  int dims_integrated = 0;

  // Momenta eliminated in closed form before the Newton iteration
  // (Abelian decoupled components), with the values used.
  std::vector<int> eliminated_indices;
  Vec eliminated_values;

  // Configuration trajectory of the converged (or last) iterate.
  std::vector<double> times;
  std::vector<Vec> configs;
};

/// Newton on the initial costate with the endpoint residual
/// x(t1; x0, lambda0) - x1, Jacobian by forward differences, backtracking
/// line search (factor 1/2, smallest step 1e-8).  Failures are reported in
/// the result together with the last iterate, not thrown.
ShootingResult shoot_full(const ShootingProblem& sp);

/// Shooting in reduced coordinates: unknowns (lambdabar0, mutilde0), each
/// evaluation one reduced integration plus reconstruction, group endpoint
/// residual by chart subtraction (translation groups) or log(g1^-1 g(t1))
/// (matrix groups).  Decoupled Abelian momenta with constant body velocity
/// xitilde^a = c_a mutilde_a and vanishing connection row are eliminated in
/// closed form.
ShootingResult shoot_reduced(const ShootingProblem& sp);

/// Abelian momenta eliminable in closed form: pairs (index, c) with
/// xitilde^index = c * mutilde_index on samples and a vanishing connection
/// row.
std::vector<std::pair<int, double>> detect_decoupled_momenta(const ProblemDefinition& p);

std::string shooting_result_json(const ShootingResult& r);

}  // namespace redopt
